#pragma once

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "deltaq/rng.hpp"
#include "deltaq/scaling.hpp"

namespace deltaq {

/// Returned when the path stays positive up to the horizon.
inline constexpr double kNotHit = std::numeric_limits<double>::infinity();

struct DiffusionPath {
    double dt = 0.0;
    std::vector<double> values;     // W(k dt), k = 0..K
    std::vector<double> reflected;  // phi(W)(k dt)

    double time(std::size_t k) const { return static_cast<double>(k) * dt; }
};

/// Skorokhod reflection at zero: x(t) - min(0, inf_{s<=t} x(s)).
std::vector<double> reflect(std::span<const double> values);

/// Grid values of W; the drift is evaluated exactly, only B is discretized.
DiffusionPath simulate_w(const DiffusionParams& params, double horizon, double dt, Engine& rng);

/// First grid time k dt, k >= 1, with reflected value <= 0; kNotHit otherwise.
double hitting_time_of_zero(const DiffusionPath& path);

struct HittingOptions {
    double dt = 1e-3;
    double horizon = 20.0;
    /// Also stop inside a step with the Brownian-bridge crossing probability.
    bool bridge = false;
};

/// Streaming version of simulate_w + hitting_time_of_zero (no path storage).
double simulate_hitting_time(const DiffusionParams& params, const HittingOptions& options, Engine& rng);

/// One path at step dt/2; returns {hit on the dt/2 grid, hit on the dt grid}.
std::pair<double, double> simulate_hitting_time_pair(const DiffusionParams& params, double dt, double horizon,
                                                     Engine& rng);

}  // namespace deltaq
