#include "deltaq/fpt_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "deltaq/airy.hpp"
#include "deltaq/errors.hpp"
#include "deltaq/series_acceleration.hpp"

namespace deltaq {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPanelRelTol = 1e-11;
constexpr double kTailTol = 1e-14;
constexpr double kNegligibleMass = 1e-20;
constexpr std::size_t kMaxPanels = 100000;

double zeta_of(double w) { return 2.0 / 3.0 * w * std::sqrt(w); }

template <typename F>
double gk(F&& f, double lo, double hi, double* err) {
    double e = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, lo, hi, 12, kPanelRelTol, &e);
    *err += e;
    return v;
}

}  // namespace

FptDensity::FptDensity(const DiffusionParams& params) : params_(params) {
    params_.validate();
    if (!(params_.q > 0.0)) throw std::invalid_argument("first-passage density requires q > 0");
    if (!(params_.sigma > 0.0)) throw std::invalid_argument("first-passage density requires sigma > 0");
    tau_ = std::cbrt(1.0 / (2.0 * params_.gamma));
    q_std_ = params_.q / tau_;
    beta_std_ = params_.beta * tau_;
    sigma2_ = params_.sigma * params_.sigma;
    a_ = q_std_ / sigma2_;
    c_ = std::cbrt(2.0 * sigma2_);

    // Below s_min the hitting probability is negligible: with drift at most
    // |beta| - s on [0, s], P(H <= s) <= erfc(m / (sigma sqrt(2 s))),
    // m = q - |beta| s - s^2/2. The Airy integral is slow and pure rounding
    // noise there, so it is skipped.
    const double sigma = params_.sigma;
    auto bound = [&](double x) {
        const double m = q_std_ - std::abs(beta_std_) * x - 0.5 * x * x;
        return m <= 0.0 ? 1.0 : std::erfc(m / (sigma * std::sqrt(2.0 * x)));
    };
    double lo = 0.0;
    double hi = 1.0;
    while (bound(hi) <= kNegligibleMass && hi < 1e6) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (bound(mid) <= kNegligibleMass ? lo : hi) = mid;
    }
    s_min_ = lo;
}

DensityValue FptDensity::standard_density(double s) const {
    if (!(s > s_min_)) return {0.0, 0.0};
    const double beta = beta_std_;
    const double a = a_;
    const double c = c_;
    const double sb = s - beta;
    const double log_pref = -(sb * sb * sb + beta * beta * beta) / (6.0 * sigma2_) - beta * a;

    // e^{s u + log_pref} [Bi(cu) Ai(c(u-a)) - Ai(cu) Bi(c(u-a))] / (pi (Ai(cu)^2 + Bi(cu)^2))
    auto integrand = [&](double u) -> double {
        const double x = c * u;
        const double y = c * (u - a);
        const double base = s * u + log_pref;
        if (x <= 0.0) {
            const AiryValues ax = detail::airy_unchecked(x);
            const AiryValues ay = detail::airy_unchecked(y);
            const double num = ax.bi * ay.ai - ax.ai * ay.bi;
            return std::exp(base) * num / (kPi * (ax.ai * ax.ai + ax.bi * ax.bi));
        }
        const ScaledAiry sx = detail::airy_scaled(x);
        const double den = kPi * (sx.bi * sx.bi + sx.ai * sx.ai * std::exp(-4.0 * sx.zeta));
        if (y <= 0.0) {
            const AiryValues ay = detail::airy_unchecked(y);
            return (sx.bi * ay.ai * std::exp(base - sx.zeta) - sx.ai * ay.bi * std::exp(base - 3.0 * sx.zeta)) / den;
        }
        const ScaledAiry sy = detail::airy_scaled(y);
        return (sx.bi * sy.ai * std::exp(base - sx.zeta - sy.zeta) -
                sx.ai * sy.bi * std::exp(base - 3.0 * sx.zeta + sy.zeta)) /
               den;
    };

    double err = 0.0;
    double total = 0.0;

    // u in [0, a]: Ai(c(u-a)) and Bi(c(u-a)) on the oscillatory side.
    total += gk(integrand, 0.0, a, &err);

    // u > a: superexponential decay; the log-envelope s u - zeta(cu) - zeta(c(u-a))
    // peaks where s = c^{3/2} (sqrt(u) + sqrt(u-a)).
    {
        const double c32 = c * std::sqrt(c);
        auto slope = [&](double u) { return c32 * (std::sqrt(u) + std::sqrt(u - a)); };
        auto envelope = [&](double u) { return s * u - zeta_of(c * u) - zeta_of(c * (u - a)); };
        double peak = a;
        if (s > slope(a)) {
            double lo = a;
            double hi = a + 1.0;
            while (slope(hi) < s) hi = a + 2.0 * (hi - a);
            for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (slope(mid) < s ? lo : hi) = mid;
            }
            peak = 0.5 * (lo + hi);
        }
        const double top = envelope(peak);
        if (top + log_pref > -745.0) {
            double upper = peak;
            double step = std::max(0.5, 0.25 * (peak - a));
            while (envelope(upper) > top - 50.0) {
                upper += step;
                step *= 1.5;
            }
            if (peak > a) total += gk(integrand, a, peak, &err);
            total += gk(integrand, peak, upper, &err);
        }
    }

    // u < 0: integrate between zeros of the phase difference
    // zeta(z + c a) - zeta(z), z = -c u, and accelerate the alternating sums.
    {
        const double ca = c * a;
        auto phase = [&](double z) { return zeta_of(z + ca) - zeta_of(z); };
        auto solve_phase = [&](double target) {
            double lo = 0.0;
            double hi = std::max(1.0, 4.0 * (target / ca) * (target / ca));
            while (phase(hi) < target) hi *= 2.0;
            for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (phase(mid) < target ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        };
        double k = std::floor(phase(0.0) / kPi) + 1.0;
        double right = 0.0;
        double partial = 0.0;
        double previous_estimate = std::numeric_limits<double>::quiet_NaN();
        int settled = 0;
        WynnEpsilon wynn;
        double tail = 0.0;
        bool done = false;
        for (std::size_t panel = 0; panel < kMaxPanels; ++panel, k += 1.0) {
            const double left = -solve_phase(k * kPi) / c;
            partial += gk(integrand, left, right, &err);
            right = left;
            const double estimate = wynn.push(partial);

            const AiryValues ax = detail::airy_unchecked(c * left);
            const AiryValues ay = detail::airy_unchecked(c * (left - a));
            const double ratio = std::sqrt((ay.ai * ay.ai + ay.bi * ay.bi) / (ax.ai * ax.ai + ax.bi * ax.bi));
            tail = 1.1 * ratio * std::exp(s * left + log_pref) / (kPi * s);
            if (tail < kTailTol && panel >= 1) {
                total += partial;
                done = true;
                break;
            }
            if (panel >= 8 && std::abs(estimate - previous_estimate) < kTailTol) {
                if (++settled >= 2) {
                    total += estimate;
                    err += std::abs(estimate - partial) * 1e-3 + std::abs(estimate - previous_estimate);
                    done = true;
                    break;
                }
            } else {
                settled = 0;
            }
            previous_estimate = estimate;
        }
        if (!done) {
            throw NumericalError("first-passage density: oscillatory tail did not converge", tail);
        }
    }

    return {total, err};
}

double FptDensity::standard_upper() const {
    if (upper_cache_ > 0.0) return upper_cache_;
    double s = std::max(2.0, beta_std_ + 2.0);
    for (int it = 0; it < 200; ++it) {
        const double f = standard_density(s).value;
        if (s > beta_std_ + 1.0 && std::abs(f) * s < 1e-16) break;
        s *= 1.2;
    }
    upper_cache_ = s;
    return s;
}

DensityValue FptDensity::evaluate(double t) const {
    if (!(t > 0.0)) return {0.0, 0.0};
    const double scale = tau_ * tau_;
    const DensityValue v = standard_density(t / scale);
    return {v.value / scale, v.abs_error / scale};
}

double FptDensity::density(double t) const {
    const DensityValue v = evaluate(t);
    if (!(v.abs_error <= 1e-8) || !std::isfinite(v.value)) {
        throw NumericalError("first-passage density quadrature missed its tolerance", v.abs_error);
    }
    return v.value;
}

double FptDensity::standard_integral(double lo, double hi, bool first_moment) const {
    lo = std::max(lo, s_min_);
    if (!(hi > lo)) return 0.0;
    auto f = [&](double s) {
        const double v = standard_density(s).value;
        return first_moment ? s * v : v;
    };
    // Unit-width panels with GK15, bisected until the Kronrod error
    // estimate meets an absolute budget proportional to the panel width.
    // The density is O(1) and smooth away from 0, so most panels pass at once.
    constexpr double kAbsTol = 1e-10;
    constexpr int kMaxDepth = 12;
    constexpr double kPanelWidth = 1.0;
    double err = 0.0;
    auto panel = [&](auto&& self, double a, double b, int depth) -> double {
        double e = 0.0;
        const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &e);
        if (e <= kAbsTol * (b - a) || depth >= kMaxDepth) {
            err += e;
            return v;
        }
        const double m = 0.5 * (a + b);
        return self(self, a, m, depth + 1) + self(self, m, b, depth + 1);
    };
    const auto pieces = static_cast<int>(std::ceil((hi - lo) / kPanelWidth));
    const double width = (hi - lo) / pieces;
    double total = 0.0;
    for (int i = 0; i < pieces; ++i) total += panel(panel, lo + i * width, i + 1 == pieces ? hi : lo + (i + 1) * width, 0);
    if (!(err < 1e-6)) throw NumericalError("first-passage time integral did not converge", err);
    return total;
}

double FptDensity::cdf(double t) const {
    if (!(t > 0.0)) return 0.0;
    const double s = std::min(t / (tau_ * tau_), standard_upper());
    return std::clamp(standard_integral(0.0, s, false), 0.0, 1.0);
}

double FptDensity::total_mass() const { return standard_integral(0.0, standard_upper(), false); }

double FptDensity::mean() const { return tau_ * tau_ * standard_integral(0.0, standard_upper(), true); }

TabulatedCdf FptDensity::tabulate_cdf(std::size_t cells) const {
    if (cells < 2) throw std::invalid_argument("need at least two cells");
    const double upper = standard_upper();
    const double h = upper / static_cast<double>(cells);
    const double scale = tau_ * tau_;
    std::vector<double> times(cells + 1);
    std::vector<double> cdf(cells + 1);
    std::vector<double> dens(cells + 1);
    auto f = [&](double s) { return standard_density(s).value; };
    double acc = 0.0;
    for (std::size_t i = 0; i <= cells; ++i) {
        const double s = h * static_cast<double>(i);
        times[i] = s * scale;
        dens[i] = f(s) / scale;
        if (i > 0) acc += boost::math::quadrature::gauss<double, 7>::integrate(f, s - h, s);
        cdf[i] = acc;
    }
    return TabulatedCdf(std::move(times), std::move(cdf), std::move(dens));
}

TabulatedCdf::TabulatedCdf(std::vector<double> times, std::vector<double> cdf, std::vector<double> density)
    : times_(std::move(times)), cdf_(std::move(cdf)), density_(std::move(density)) {
    if (times_.size() < 2 || times_.size() != cdf_.size() || times_.size() != density_.size()) {
        throw std::invalid_argument("inconsistent CDF table");
    }
    // Quadrature noise of order 1e-12 can break monotonicity in the flat tail.
    for (std::size_t i = 1; i < cdf_.size(); ++i) cdf_[i] = std::max(cdf_[i], cdf_[i - 1]);
    if (cdf_.back() > 0.0)
        for (auto& v : cdf_) v /= cdf_.back();
    for (auto& d : density_) d = std::max(d, 0.0);
}

double TabulatedCdf::operator()(double t) const {
    if (!(t > times_.front())) return std::clamp(cdf_.front(), 0.0, 1.0);
    if (t >= times_.back()) return std::clamp(cdf_.back(), 0.0, 1.0);
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double h = times_[j + 1] - times_[j];
    const double x = (t - times_[j]) / h;
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double h00 = 2 * x3 - 3 * x2 + 1;
    const double h10 = x3 - 2 * x2 + x;
    const double h01 = -2 * x3 + 3 * x2;
    const double h11 = x3 - x2;
    const double v = h00 * cdf_[j] + h10 * h * density_[j] + h01 * cdf_[j + 1] + h11 * h * density_[j + 1];
    return std::clamp(v, cdf_[j], cdf_[j + 1]);
}

}  // namespace deltaq
