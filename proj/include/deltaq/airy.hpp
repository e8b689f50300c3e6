#pragma once

namespace deltaq {

struct AiryValues {
    double ai;
    double aip;
    double bi;
    double bip;
};

/// Ai, Ai', Bi, Bi' on the supported window [-60, 40]; throws
/// std::domain_error outside it.
AiryValues airy_values(double x);
double airy_ai(double x);
double airy_bi(double x);

inline constexpr double kAiryMinX = -60.0;
inline constexpr double kAiryMaxX = 40.0;

/// Exponentially scaled pair for x >= 0: Ai(x) = ai * exp(-zeta),
/// Bi(x) = bi * exp(zeta), zeta = (2/3) x^{3/2}. Valid for any finite x >= 0.
struct ScaledAiry {
    double ai;
    double bi;
    double zeta;
};

namespace detail {

// No range check; the asymptotic branch keeps the negative axis accurate far
// beyond the public window. Bi overflows for x > ~104.
AiryValues airy_unchecked(double x);
ScaledAiry airy_scaled(double x);

}  // namespace detail

}  // namespace deltaq
