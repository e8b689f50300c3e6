#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "deltaq/execution.hpp"

namespace deltaq {

struct McSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;  // mean -/+ 1.96 std_error
    double ci_high = 0.0;
};

/// Sums over sorted values, so the result does not depend on input order.
McSummary summarize(std::span<const double> samples);

/// 1.06 s N^{-1/5}; throws for fewer than two samples or zero spread.
double silverman_bandwidth(std::span<const double> samples);

/// Gaussian KDE on `grid`; Silverman's bandwidth unless one is given.
/// Kernel terms beyond 12 bandwidths are dropped.
std::vector<double> kde_gaussian(std::span<const double> samples, std::optional<double> bandwidth,
                                 std::span<const double> grid, Execution execution = Execution::serial);

/// sup_x |F_N(x) - F(x)|, checking both sides of every jump.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// P(K > x) for the Kolmogorov distribution.
double kolmogorov_survival(double x);

struct TwoSampleKs {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Asymptotic p-value with the usual small-sample correction.
TwoSampleKs ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ChiSquare {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/// Pearson goodness of fit of category counts against probabilities.
ChiSquare chi_square_goodness_of_fit(std::span<const std::size_t> counts, std::span<const double> probs);

/// Pearson test of two samples of counts over a common set of categories.
/// Categories whose pooled count is below `min_pooled` are merged into one.
ChiSquare chi_square_homogeneity(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                 std::size_t min_pooled = 5);

}  // namespace deltaq
