#include "deltaq/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace deltaq {

void DiffusionParams::validate() const {
    if (!std::isfinite(q) || !std::isfinite(beta)) throw std::invalid_argument("q and beta must be finite");
    if (q < 0.0) throw std::invalid_argument("q must be nonnegative");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be nonnegative");
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
}

}  // namespace

double analytic_lambda(const ServiceDistribution& dist, double alpha) {
    check_alpha(alpha);
    return 1.0 / dist.moment(1.0 + alpha);
}

DiffusionParams diffusion_params(const ServiceDistribution& dist, double alpha, double lambda, double beta,
                                 double q) {
    check_alpha(alpha);
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double m_a = dist.moment(alpha);
    const double m_1_2a = dist.moment(1.0 + 2.0 * alpha);
    const double m_2_a = dist.moment(2.0 + alpha);
    DiffusionParams p;
    p.q = q;
    p.beta = beta;
    p.gamma = lambda * m_1_2a / (2.0 * m_a);
    p.sigma = lambda * std::sqrt(m_a * m_2_a);
    return p;
}

double drift_coefficient(const ServiceDistribution& dist, double alpha) {
    check_alpha(alpha);
    return dist.moment(1.0 + 2.0 * alpha) / (dist.moment(alpha) * dist.moment(1.0 + alpha));
}

ScaledPath::ScaledPath(std::span<const std::int64_t> values, double n)
    : values_(values.begin(), values.end()) {
    if (values_.empty()) throw std::invalid_argument("cannot rescale an empty path");
    if (!(n > 0.0)) throw std::invalid_argument("scale n must be positive");
    space_scale_ = std::cbrt(n);
    time_step_ = 1.0 / (space_scale_ * space_scale_);
}

double ScaledPath::operator()(double t) const {
    if (!(t >= 0.0) || t > horizon()) throw std::out_of_range("time outside the rescaled path domain");
    // The small offset keeps exact grid times k / n^{2/3} on their own step.
    auto k = static_cast<std::size_t>(std::floor(t / time_step_ + 1e-9));
    k = std::min(k, values_.size() - 1);
    return static_cast<double>(values_[k]) / space_scale_;
}

ScaledPath rescale_path(std::span<const std::int64_t> values, double n) { return ScaledPath(values, n); }

}  // namespace deltaq
