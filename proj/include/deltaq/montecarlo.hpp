#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "deltaq/diffusion_sim.hpp"
#include "deltaq/execution.hpp"
#include "deltaq/queue_sim.hpp"

namespace deltaq {

// Replication r always draws from substream(seed, r), and results are stored
// by replication index, so serial and parallel runs agree exactly.

enum class BusyPeriodMethod { timeline, stepwise };

std::vector<BusyPeriodRecord> busy_period_replications(const QueueConfig& config, std::size_t replications,
                                                       std::uint64_t seed, Execution execution,
                                                       BusyPeriodMethod method = BusyPeriodMethod::timeline);

std::vector<double> hitting_time_replications(const DiffusionParams& params, const HittingOptions& options,
                                              std::size_t replications, std::uint64_t seed, Execution execution);

/// {dt/2 grid, dt grid} hitting times from common paths.
std::vector<std::pair<double, double>> hitting_time_pair_replications(const DiffusionParams& params, double dt,
                                                                      double horizon, std::size_t replications,
                                                                      std::uint64_t seed, Execution execution);

struct PathMeans {
    std::vector<double> times;
    std::vector<double> queue;        // E[n^{-1/3} Q(t n^{2/3})]
    std::vector<double> unreflected;  // same for N
    std::vector<double> upper;        // same for N^U
    std::size_t coupling_violations = 0;  // replications with N(k) > N^U(k) somewhere
};

PathMeans rescaled_path_means(const QueueConfig& config, std::span<const double> times, std::size_t replications,
                              std::uint64_t seed, Execution execution);

/// E[phi(W)(t)] on `times` (each a multiple of dt up to rounding).
std::vector<double> reflected_diffusion_means(const DiffusionParams& params, std::span<const double> times,
                                              double dt, std::size_t replications, std::uint64_t seed,
                                              Execution execution);

}  // namespace deltaq
