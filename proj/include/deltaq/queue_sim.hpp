#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "deltaq/distributions.hpp"
#include "deltaq/rng.hpp"

namespace deltaq {

enum class ServiceScaling {
    heavy_traffic,  // service time S (1 + beta n^{-1/3}) / n
    none,           // service time S
};

struct QueueConfig {
    std::size_t n = 1000;  // pool of customers not yet arrived
    double alpha = 0.0;
    double beta = 1.0;
    double q = 1.0;
    ServiceDistribution dist = ServiceDistribution::exponential(1.0);
    std::optional<double> fixed_lambda;  // unset: lambda = 1 / E[S^{1+alpha}]
    ServiceScaling scaling = ServiceScaling::heavy_traffic;
    std::optional<std::size_t> initial_queue;  // unset: round(q n^{1/3}), ties to even
    /// true: the initial customers are part of the n (pool max(n - Q(0), 0));
    /// false: the pool keeps n customers besides them.
    bool initial_from_pool = true;

    void validate() const;
    /// max(n, 1); the n in n^{1/3} and n^{2/3} scalings.
    double scale_n() const { return n == 0 ? 1.0 : static_cast<double>(n); }
    double lambda() const;
    std::size_t initial_queue_length() const;
    /// Customers still to arrive at time zero.
    std::size_t pool_size() const;
    double speed_factor() const;
    /// Multiplier turning S into the service time.
    double service_scale() const;
};

/// Customers 0..n-1 form the pool; n..n+Q(0)-1 are the initial queue.
using CustomerId = std::size_t;
inline constexpr std::int64_t kNoParent = -1;

struct Population {
    std::vector<double> services;
    std::vector<double> alpha_weights;
    std::vector<double> scaled_services;
    std::vector<double> initial_services;
    double alpha = 0.0;
    double lambda = 1.0;
    double speed_factor = 1.0;
    double service_scale = 1.0;

    std::size_t pool_size() const { return services.size(); }
    std::size_t initial_count() const { return initial_services.size(); }
    std::size_t customer_count() const { return pool_size() + initial_count(); }
    double service(CustomerId id) const;
    double scaled_service(CustomerId id) const { return service(id) * service_scale; }
    double weight(CustomerId id) const;
};

/// Indices of the first `count` entries of a weight-size-biased ordering.
std::vector<std::size_t> size_biased_prefix(std::span<const double> weights, std::size_t count, Engine& rng);

/// Draws pool_size() + Q(0) services; the first Q(0) of their alpha-size-biased
/// ordering become the initial queue (in that order), the rest the pool.
Population build_population(const QueueConfig& config, Engine& rng);

class EmptyQueue : public std::logic_error {
public:
    EmptyQueue() : std::logic_error("queue is empty: pick an idle customer first") {}
};

class PoolExhausted : public std::runtime_error {
public:
    PoolExhausted() : std::runtime_error("no customers left: simulation complete") {}
};

struct StepResult {
    CustomerId served;
    std::size_t arrivals;        // A(k)
    std::size_t upper_arrivals;  // A^U(k); equals arrivals unless tracked
};

/// State of the embedded chain: FIFO queue, customer in service (after an
/// idle pick) and the pool of customers that have not arrived yet.
class EmbeddedChain {
public:
    explicit EmbeddedChain(const Population& population);

    /// Serves the next customer, drawing the arrivals during its service.
    /// With `track_upper`, every unserved customer still waiting also gets a
    /// fresh clock and those firing are added to `upper_arrivals`.
    StepResult step(Engine& rng, bool track_upper = false);
    /// Moves an S^alpha-size-biased pool customer into service.
    CustomerId idle_pick(Engine& rng);

    bool needs_idle_pick() const { return queue_.empty() && !in_service_; }
    bool exhausted() const { return needs_idle_pick() && pool_.empty(); }
    std::size_t queue_length() const { return queue_.size(); }
    std::size_t pool_remaining() const { return pool_.size(); }
    std::size_t served() const { return served_; }
    bool has_customer_in_service() const { return in_service_.has_value(); }
    const std::vector<std::int64_t>& parents() const { return parent_; }

private:
    const Population& population_;
    std::vector<CustomerId> pool_;
    std::deque<CustomerId> queue_;
    std::optional<CustomerId> in_service_;
    std::vector<std::int64_t> parent_;
    std::vector<std::pair<double, CustomerId>> joiners_;
    std::size_t served_ = 0;
};

/// Trajectory of the embedded chain. Step-indexed vectors have length K + 1;
/// entry 0 holds the initial state (A and served index unused there).
struct EmbeddedPath {
    std::vector<std::int64_t> arrivals;
    std::vector<std::int64_t> unreflected;
    std::vector<std::int64_t> queue;
    std::vector<std::int64_t> served_order;
    std::vector<std::size_t> busy_period_ends;  // steps after which the server idles
    std::vector<std::int64_t> parent;           // per customer id
    std::size_t pool_size = 0;
    std::size_t initial_queue = 0;

    std::size_t steps() const { return queue.empty() ? 0 : queue.size() - 1; }
};

struct BusyPeriodRecord {
    std::size_t customers_served = 0;
    std::size_t initial_queue = 0;
    double scaled_value = 0.0;  // BP / n^{2/3}; BP itself when unscaled
};

struct UpperBoundRun {
    EmbeddedPath path;
    std::vector<std::int64_t> upper_arrivals;    // A^U(k)
    std::vector<std::int64_t> upper_unreflected;  // N^U(k)
};

struct ForestSummary {
    std::size_t roots = 0;
    std::size_t vertices = 0;
    std::vector<std::size_t> tree_sizes;
    bool parents_served_first = true;  // implies acyclic
};

EmbeddedPath simulate_path(const QueueConfig& config, std::size_t horizon_steps, Engine& rng);
UpperBoundRun simulate_upper_bound(const QueueConfig& config, std::size_t horizon_steps, Engine& rng);

/// Timeline form: all arrival clocks drawn up front and sorted; stops at the
/// first empty queue. Same law as the step-wise chain over the first busy period.
BusyPeriodRecord simulate_first_busy_period_fast(const QueueConfig& config, Engine& rng);
/// Step-wise chain run until the queue first empties.
BusyPeriodRecord simulate_first_busy_period_stepwise(const QueueConfig& config, Engine& rng);

BusyPeriodRecord make_busy_period_record(const QueueConfig& config, std::size_t customers_served);

/// Forest spanned by the first busy period of `path`.
ForestSummary first_busy_period_forest(const EmbeddedPath& path);

/// sum S_i^2 / sum S_i.
double criticality_diagnostic(std::span<const double> services);

}  // namespace deltaq
