#include "deltaq/airy.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace deltaq {

namespace {

using real = long double;

constexpr real kPi = 3.141592653589793238462643383279502884L;
constexpr real kSqrtPi = 1.772453850905516027298167483341145183L;

// Ai(0), -Ai'(0), Bi(0), Bi'(0).
constexpr real kAi0 = 0.3550280538878172392600631860041831763980L;
constexpr real kAip0 = -0.2588194037928067984051835601892039634791L;
constexpr real kBi0 = 0.6149266274460007351509223690936135535947L;
constexpr real kBip0 = 0.4482883573538263579148237103988283908662L;

constexpr real kSeriesLimit = 4.5L;
constexpr real kAsymptoticLimit = 9.5L;
constexpr real kAnchorStep = 0.25L;
constexpr int kAnchorCount = 21;  // (9.5 - 4.5) / 0.25 + 1

struct Solution {
    real y;
    real yp;
};

struct Quad {
    Solution ai;
    Solution bi;
};

// Taylor expansion of a solution of y'' = x y about x0, evaluated at x0 + h.
Solution taylor(real x0, Solution at, real h) {
    real a_km2 = 0.0L;  // a_{k-2}
    real a_km1 = at.y;  // a_{k-1}
    real a_k = at.yp;   // a_k, k = 1
    real hk = h;        // h^k
    real y = at.y + a_k * h;
    real yp = a_k;
    real hkm1 = 1.0L;  // h^{k-1}
    int quiet = 0;
    for (int k = 1; k < 400; ++k) {
        // a_{k+1} = (x0 a_{k-1} + a_{k-2}) / (k (k+1))
        const real next = (x0 * a_km1 + a_km2) / (static_cast<real>(k) * static_cast<real>(k + 1));
        a_km2 = a_km1;
        a_km1 = a_k;
        a_k = next;
        hkm1 = hk;
        hk *= h;
        const real term = a_k * hk;
        const real dterm = static_cast<real>(k + 1) * a_k * hkm1;
        y += term;
        yp += dterm;
        const real scale = std::fabs(y) + std::fabs(yp) + 1e-300L;
        if (std::fabs(term) + std::fabs(dterm) <= 1e-21L * scale) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    return {y, yp};
}

Quad maclaurin(real x) {
    return {taylor(0.0L, {kAi0, kAip0}, x), taylor(0.0L, {kBi0, kBip0}, x)};
}

struct AsymptoticCoefficients {
    static constexpr int kTerms = 80;
    std::array<real, kTerms> u{};
    std::array<real, kTerms> v{};

    AsymptoticCoefficients() {
        u[0] = 1.0L;
        v[0] = 1.0L;
        for (int k = 1; k < kTerms; ++k) {
            const real kk = static_cast<real>(k);
            u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216 * kk);
            v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
        }
    }
};

const AsymptoticCoefficients& coefficients() {
    static const AsymptoticCoefficients c;
    return c;
}

// Sums sum_k sign^k c_k zeta^{-k} until terms stop decreasing or vanish.
template <typename Coeff>
real asymptotic_sum(const Coeff& c, real inv_zeta, real sign, int first, int stride) {
    real sum = 0.0L;
    real prev = INFINITY;
    real power = std::pow(inv_zeta, static_cast<real>(first));
    const real step = std::pow(inv_zeta, static_cast<real>(stride));
    real s = 1.0L;
    for (int k = first; k < AsymptoticCoefficients::kTerms; k += stride) {
        const real term = s * c[k] * power;
        if (std::fabs(term) >= prev) break;
        sum += term;
        prev = std::fabs(term);
        if (prev <= 1e-22L * std::fabs(sum)) break;
        power *= step;
        s *= sign;
    }
    return sum;
}

// Scaled values for x >= kAsymptoticLimit: Ai = ai e^{-z}, Bi = bi e^{z}.
struct ScaledQuad {
    real ai, aip, bi, bip, zeta;
};

ScaledQuad asymptotic_positive(real x) {
    const auto& c = coefficients();
    const real zeta = 2.0L / 3.0L * x * std::sqrt(x);
    const real iz = 1.0L / zeta;
    const real x14 = std::sqrt(std::sqrt(x));
    const real su_alt = asymptotic_sum(c.u, iz, -1.0L, 0, 1);
    const real sv_alt = asymptotic_sum(c.v, iz, -1.0L, 0, 1);
    const real su = asymptotic_sum(c.u, iz, 1.0L, 0, 1);
    const real sv = asymptotic_sum(c.v, iz, 1.0L, 0, 1);
    return {su_alt / (2.0L * kSqrtPi * x14), -x14 * sv_alt / (2.0L * kSqrtPi), su / (kSqrtPi * x14),
            x14 * sv / kSqrtPi, zeta};
}

Quad asymptotic_negative(real x) {
    const auto& c = coefficients();
    const real z = -x;
    const real zeta = 2.0L / 3.0L * z * std::sqrt(z);
    const real iz = 1.0L / zeta;
    const real z14 = std::sqrt(std::sqrt(z));
    // even-index and odd-index subsequences with alternating signs
    const real ue = asymptotic_sum(c.u, iz, -1.0L, 0, 2);
    const real uo = asymptotic_sum(c.u, iz, -1.0L, 1, 2);
    const real ve = asymptotic_sum(c.v, iz, -1.0L, 0, 2);
    const real vo = asymptotic_sum(c.v, iz, -1.0L, 1, 2);
    const real theta = zeta - kPi / 4.0L;
    const real cs = std::cos(theta);
    const real sn = std::sin(theta);
    const real amp = 1.0L / (kSqrtPi * z14);
    const real damp = z14 / kSqrtPi;
    return {{amp * (cs * ue + sn * uo), damp * (sn * ve - cs * vo)},
            {amp * (-sn * ue + cs * uo), damp * (cs * ve + sn * vo)}};
}

// Anchors on the bridge intervals [-9.5, -4.5] and [4.5, 9.5].
struct Anchors {
    std::array<Solution, kAnchorCount> ai_pos{};  // x = 4.5 + j * step
    std::array<Quad, kAnchorCount> neg{};         // x = -4.5 - j * step

    Anchors() {
        // Ai is recessive for x > 0: integrate backward from the asymptotic end.
        const ScaledQuad end = asymptotic_positive(kAsymptoticLimit);
        const real decay = std::exp(-end.zeta);
        Solution s{end.ai * decay, end.aip * decay};
        ai_pos[kAnchorCount - 1] = s;
        for (int j = kAnchorCount - 2; j >= 0; --j) {
            const real x_from = kSeriesLimit + (j + 1) * kAnchorStep;
            s = taylor(x_from, s, -kAnchorStep);
            ai_pos[j] = s;
        }
        // Oscillatory side: both solutions are stable, march outward.
        Quad q = maclaurin(-kSeriesLimit);
        neg[0] = q;
        for (int j = 1; j < kAnchorCount; ++j) {
            const real x_from = -kSeriesLimit - (j - 1) * kAnchorStep;
            q = {taylor(x_from, q.ai, -kAnchorStep), taylor(x_from, q.bi, -kAnchorStep)};
            neg[j] = q;
        }
    }
};

const Anchors& anchors() {
    static const Anchors a;
    return a;
}

Quad evaluate(real x) {
    const real ax = std::fabs(x);
    if (ax <= kSeriesLimit) return maclaurin(x);
    if (x <= -kAsymptoticLimit) return asymptotic_negative(x);
    if (x >= kAsymptoticLimit) {
        const ScaledQuad s = asymptotic_positive(x);
        const real d = std::exp(-s.zeta);
        const real g = std::exp(s.zeta);
        return {{s.ai * d, s.aip * d}, {s.bi * g, s.bip * g}};
    }
    const int j = static_cast<int>(std::lround((ax - kSeriesLimit) / kAnchorStep));
    if (x > 0) {
        const real x0 = kSeriesLimit + j * kAnchorStep;
        // Bi has no cancellation in its Maclaurin series for x > 0.
        return {taylor(x0, anchors().ai_pos[j], x - x0), taylor(0.0L, {kBi0, kBip0}, x)};
    }
    const real x0 = -kSeriesLimit - j * kAnchorStep;
    const Quad& q = anchors().neg[j];
    return {taylor(x0, q.ai, x - x0), taylor(x0, q.bi, x - x0)};
}

void check_range(double x) {
    if (!(x >= kAiryMinX && x <= kAiryMaxX)) {
        throw std::domain_error("Airy argument " + std::to_string(x) + " outside [-60, 40]");
    }
}

}  // namespace

namespace detail {

AiryValues airy_unchecked(double x) {
    const Quad q = evaluate(x);
    return {static_cast<double>(q.ai.y), static_cast<double>(q.ai.yp), static_cast<double>(q.bi.y),
            static_cast<double>(q.bi.yp)};
}

ScaledAiry airy_scaled(double x) {
    if (!(x >= 0.0)) throw std::domain_error("scaled Airy pair requires x >= 0");
    const real xl = x;
    if (xl >= kAsymptoticLimit) {
        const ScaledQuad s = asymptotic_positive(xl);
        return {static_cast<double>(s.ai), static_cast<double>(s.bi), static_cast<double>(s.zeta)};
    }
    const real zeta = 2.0L / 3.0L * xl * std::sqrt(xl);
    const Quad q = evaluate(xl);
    return {static_cast<double>(q.ai.y * std::exp(zeta)), static_cast<double>(q.bi.y * std::exp(-zeta)),
            static_cast<double>(zeta)};
}

}  // namespace detail

AiryValues airy_values(double x) {
    check_range(x);
    return detail::airy_unchecked(x);
}

double airy_ai(double x) { return airy_values(x).ai; }

double airy_bi(double x) { return airy_values(x).bi; }

}  // namespace deltaq
