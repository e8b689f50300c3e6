#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "deltaq/distributions.hpp"

namespace deltaq {

/// Parameters of W(t) = q + beta t - gamma t^2 + sigma B(t).
struct DiffusionParams {
    double q = 1.0;
    double beta = 1.0;
    double gamma = 0.5;
    double sigma = 1.0;

    double drift(double t) const { return q + beta * t - gamma * t * t; }
    void validate() const;
};

/// lambda = 1 / E[S^{1+alpha}], the heavy-traffic choice with rho_n = 1 + beta n^{-1/3}.
double analytic_lambda(const ServiceDistribution& dist, double alpha);

/// gamma = lambda E[S^{1+2a}] / (2 E[S^a]),  sigma^2 = lambda^2 E[S^a] E[S^{2+a}].
DiffusionParams diffusion_params(const ServiceDistribution& dist, double alpha, double lambda, double beta,
                                 double q);

/// f(alpha) = E[S^{1+2a}] / (E[S^a] E[S^{1+a}]); nondecreasing in alpha.
double drift_coefficient(const ServiceDistribution& dist, double alpha);

/// t -> n^{-1/3} X(floor(t n^{2/3})) for an integer-valued path X(0..len-1).
class ScaledPath {
public:
    ScaledPath(std::span<const std::int64_t> values, double n);

    double operator()(double t) const;
    double time_step() const { return time_step_; }
    /// Right end of the domain, len / n^{2/3}.
    double horizon() const { return time_step_ * static_cast<double>(values_.size()); }

private:
    std::vector<std::int64_t> values_;
    double space_scale_;
    double time_step_;
};

ScaledPath rescale_path(std::span<const std::int64_t> values, double n);

}  // namespace deltaq
