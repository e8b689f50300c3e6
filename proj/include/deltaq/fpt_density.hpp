#pragma once

#include <cstddef>
#include <vector>

#include "deltaq/scaling.hpp"

namespace deltaq {

struct DensityValue {
    double value;
    double abs_error;
};

/// Piecewise cubic Hermite CDF built from density values and cell integrals.
class TabulatedCdf {
public:
    TabulatedCdf(std::vector<double> times, std::vector<double> cdf, std::vector<double> density);

    double operator()(double t) const;
    double upper_time() const { return times_.back(); }

private:
    std::vector<double> times_;
    std::vector<double> cdf_;
    std::vector<double> density_;
};

/// First-passage time of zero for W(t) = q + beta t - gamma t^2 + sigma B(t),
/// started at q > 0. Evaluated through the standardized process with
/// quadratic coefficient 1/2 (time scale tau = (2 gamma)^{-1/3}):
/// H_W = tau^2 H_std with q_std = q / tau, beta_std = beta tau, sigma_std = sigma.
class FptDensity {
public:
    explicit FptDensity(const DiffusionParams& params);

    const DiffusionParams& params() const { return params_; }
    double tau() const { return tau_; }
    /// Standardized constants: a = q_std / sigma^2, c = (2 sigma^2)^{1/3}.
    double a() const { return a_; }
    double c() const { return c_; }
    double standard_q() const { return q_std_; }
    double standard_beta() const { return beta_std_; }

    DensityValue evaluate(double t) const;
    /// Throws NumericalError when the u-quadrature misses its tolerance.
    double density(double t) const;
    double cdf(double t) const;
    double total_mass() const;
    double mean() const;

    /// Time beyond which the density is below ~1e-16.
    double upper_time() const { return tau_ * tau_ * standard_upper(); }
    TabulatedCdf tabulate_cdf(std::size_t cells = 400) const;

private:
    DensityValue standard_density(double s) const;
    double standard_upper() const;
    double standard_integral(double lo, double hi, bool first_moment) const;

    DiffusionParams params_;
    double tau_;
    double q_std_;
    double beta_std_;
    double sigma2_;
    double a_;
    double c_;
    double s_min_ = 0.0;
    mutable double upper_cache_ = -1.0;
};

}  // namespace deltaq
