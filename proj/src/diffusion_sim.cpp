#include "deltaq/diffusion_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>

namespace deltaq {

namespace {

void check_grid(double horizon, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
}

std::size_t step_count(double horizon, double dt) {
    return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

}  // namespace

std::vector<double> reflect(std::span<const double> values) {
    std::vector<double> out(values.size());
    double running_min = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        running_min = std::min(running_min, values[k]);
        out[k] = values[k] - running_min;
    }
    return out;
}

DiffusionPath simulate_w(const DiffusionParams& params, double horizon, double dt, Engine& rng) {
    params.validate();
    check_grid(horizon, dt);
    const std::size_t steps = step_count(horizon, dt);
    boost::random::normal_distribution<double> normal;
    const double scale = params.sigma * std::sqrt(dt);
    DiffusionPath path;
    path.dt = dt;
    path.values.resize(steps + 1);
    double noise = 0.0;
    path.values[0] = params.q;
    for (std::size_t k = 1; k <= steps; ++k) {
        noise += scale * normal(rng);
        path.values[k] = params.drift(path.time(k)) + noise;
    }
    path.reflected = reflect(path.values);
    return path;
}

double hitting_time_of_zero(const DiffusionPath& path) {
    for (std::size_t k = 1; k < path.reflected.size(); ++k)
        if (path.reflected[k] <= 0.0) return path.time(k);
    return kNotHit;
}

double simulate_hitting_time(const DiffusionParams& params, const HittingOptions& options, Engine& rng) {
    params.validate();
    check_grid(options.horizon, options.dt);
    const std::size_t steps = step_count(options.horizon, options.dt);
    const double dt = options.dt;
    const double scale = params.sigma * std::sqrt(dt);
    const double var_dt = params.sigma * params.sigma * dt;
    boost::random::normal_distribution<double> normal;
    double noise = 0.0;
    double prev = params.q;
    // Before the first visit to zero the running minimum is the start value
    // (when q > 0), so the reflected path touches zero exactly when W <= 0.
    for (std::size_t k = 1; k <= steps; ++k) {
        noise += scale * normal(rng);
        const double t = static_cast<double>(k) * dt;
        const double w = params.drift(t) + noise;
        if (w <= 0.0) return t;
        if (options.bridge && var_dt > 0.0 && prev > 0.0) {
            const double exponent = 2.0 * prev * w / var_dt;
            if (exponent < 40.0 && uniform01(rng) < std::exp(-exponent)) return t;
        }
        prev = w;
    }
    return kNotHit;
}

std::pair<double, double> simulate_hitting_time_pair(const DiffusionParams& params, double dt, double horizon,
                                                     Engine& rng) {
    params.validate();
    check_grid(horizon, dt);
    const double fine = 0.5 * dt;
    const std::size_t steps = 2 * step_count(horizon, dt);
    const double scale = params.sigma * std::sqrt(fine);
    boost::random::normal_distribution<double> normal;
    double noise = 0.0;
    double fine_hit = kNotHit;
    for (std::size_t k = 1; k <= steps; ++k) {
        noise += scale * normal(rng);
        const double t = static_cast<double>(k) * fine;
        if (params.drift(t) + noise <= 0.0) {
            if (fine_hit == kNotHit) fine_hit = t;
            if (k % 2 == 0) return {fine_hit, t};
        }
    }
    return {fine_hit, kNotHit};
}

}  // namespace deltaq
