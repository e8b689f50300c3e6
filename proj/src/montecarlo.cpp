#include "deltaq/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

#include "deltaq/scaling.hpp"

namespace deltaq {

int configure_threads(int requested) {
    if (requested > 0) omp_set_num_threads(requested);
    return omp_get_max_threads();
}

namespace {

template <typename Body>
void for_each_replication(std::size_t replications, Execution execution, Body&& body) {
    const auto count = static_cast<std::ptrdiff_t>(replications);
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t r = 0; r < count; ++r) body(static_cast<std::size_t>(r));
    } else {
        for (std::ptrdiff_t r = 0; r < count; ++r) body(static_cast<std::size_t>(r));
    }
}

}  // namespace

std::vector<BusyPeriodRecord> busy_period_replications(const QueueConfig& config, std::size_t replications,
                                                       std::uint64_t seed, Execution execution,
                                                       BusyPeriodMethod method) {
    config.validate();
    std::vector<BusyPeriodRecord> out(replications);
    for_each_replication(replications, execution, [&](std::size_t r) {
        Engine rng = substream(seed, r);
        out[r] = method == BusyPeriodMethod::timeline ? simulate_first_busy_period_fast(config, rng)
                                                      : simulate_first_busy_period_stepwise(config, rng);
    });
    return out;
}

std::vector<double> hitting_time_replications(const DiffusionParams& params, const HittingOptions& options,
                                              std::size_t replications, std::uint64_t seed, Execution execution) {
    params.validate();
    std::vector<double> out(replications);
    for_each_replication(replications, execution, [&](std::size_t r) {
        Engine rng = substream(seed, r);
        out[r] = simulate_hitting_time(params, options, rng);
    });
    return out;
}

std::vector<std::pair<double, double>> hitting_time_pair_replications(const DiffusionParams& params, double dt,
                                                                      double horizon, std::size_t replications,
                                                                      std::uint64_t seed, Execution execution) {
    params.validate();
    std::vector<std::pair<double, double>> out(replications);
    for_each_replication(replications, execution, [&](std::size_t r) {
        Engine rng = substream(seed, r);
        out[r] = simulate_hitting_time_pair(params, dt, horizon, rng);
    });
    return out;
}

PathMeans rescaled_path_means(const QueueConfig& config, std::span<const double> times, std::size_t replications,
                              std::uint64_t seed, Execution execution) {
    config.validate();
    if (times.empty() || replications == 0) throw std::invalid_argument("need grid points and replications");
    const double n = config.scale_n();
    const double time_scale = std::cbrt(n) * std::cbrt(n);
    const double t_max = *std::max_element(times.begin(), times.end());
    if (!(t_max >= 0.0) || *std::min_element(times.begin(), times.end()) < 0.0)
        throw std::invalid_argument("grid times must be nonnegative");
    const auto steps = static_cast<std::size_t>(std::floor(t_max * time_scale + 1e-9)) + 1;
    const std::size_t g = times.size();

    std::vector<double> per_rep(3 * g * replications);
    std::vector<char> violated(replications, 0);
    for_each_replication(replications, execution, [&](std::size_t r) {
        Engine rng = substream(seed, r);
        const UpperBoundRun run = simulate_upper_bound(config, steps, rng);
        const auto& nn = run.path.unreflected;
        const auto& nu = run.upper_unreflected;
        for (std::size_t k = 0; k < nn.size(); ++k)
            if (nn[k] > nu[k]) violated[r] = 1;
        // A path cut short by an empty pool keeps its final value.
        const ScaledPath q(run.path.queue, n);
        const ScaledPath un(nn, n);
        const ScaledPath up(nu, n);
        const double last = q.horizon() - 0.5 * q.time_step();
        double* row = per_rep.data() + 3 * g * r;
        for (std::size_t i = 0; i < g; ++i) {
            const double t = std::min(times[i], last);
            row[i] = q(t);
            row[g + i] = un(t);
            row[2 * g + i] = up(t);
        }
    });

    PathMeans means;
    means.times.assign(times.begin(), times.end());
    means.queue.assign(g, 0.0);
    means.unreflected.assign(g, 0.0);
    means.upper.assign(g, 0.0);
    for (std::size_t r = 0; r < replications; ++r) {
        const double* row = per_rep.data() + 3 * g * r;
        for (std::size_t i = 0; i < g; ++i) {
            means.queue[i] += row[i];
            means.unreflected[i] += row[g + i];
            means.upper[i] += row[2 * g + i];
        }
        means.coupling_violations += static_cast<std::size_t>(violated[r]);
    }
    const auto reps = static_cast<double>(replications);
    for (std::size_t i = 0; i < g; ++i) {
        means.queue[i] /= reps;
        means.unreflected[i] /= reps;
        means.upper[i] /= reps;
    }
    return means;
}

std::vector<double> reflected_diffusion_means(const DiffusionParams& params, std::span<const double> times,
                                              double dt, std::size_t replications, std::uint64_t seed,
                                              Execution execution) {
    params.validate();
    if (times.empty() || replications == 0) throw std::invalid_argument("need grid points and replications");
    const double t_max = *std::max_element(times.begin(), times.end());
    const std::size_t g = times.size();
    std::vector<double> per_rep(g * replications);
    for_each_replication(replications, execution, [&](std::size_t r) {
        Engine rng = substream(seed, r);
        const DiffusionPath path = simulate_w(params, std::max(t_max, dt), dt, rng);
        for (std::size_t i = 0; i < g; ++i) {
            const auto k = std::min(static_cast<std::size_t>(std::llround(times[i] / dt)), path.reflected.size() - 1);
            per_rep[g * r + i] = path.reflected[k];
        }
    });
    std::vector<double> means(g, 0.0);
    for (std::size_t r = 0; r < replications; ++r)
        for (std::size_t i = 0; i < g; ++i) means[i] += per_rep[g * r + i];
    for (auto& m : means) m /= static_cast<double>(replications);
    return means;
}

}  // namespace deltaq
