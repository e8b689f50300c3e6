#include "deltaq/queue_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace deltaq {

void QueueConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
    if (!(q >= 0.0) || !std::isfinite(q)) throw std::invalid_argument("q must be nonnegative");
    if (fixed_lambda && !(*fixed_lambda > 0.0)) throw std::invalid_argument("fixed lambda must be positive");
    if (speed_factor() <= 0.0) throw std::invalid_argument("1 + beta n^{-1/3} must be positive");
}

double QueueConfig::lambda() const { return fixed_lambda ? *fixed_lambda : 1.0 / dist.moment(1.0 + alpha); }

std::size_t QueueConfig::initial_queue_length() const {
    if (initial_queue) return *initial_queue;
    // nearbyint under the default rounding mode rounds ties to even.
    return static_cast<std::size_t>(std::nearbyint(q * std::cbrt(scale_n())));
}

std::size_t QueueConfig::pool_size() const {
    if (!initial_from_pool) return n;
    const std::size_t q0 = initial_queue_length();
    return q0 >= n ? 0 : n - q0;
}

double QueueConfig::speed_factor() const {
    return scaling == ServiceScaling::heavy_traffic ? 1.0 + beta / std::cbrt(scale_n()) : 1.0;
}

double QueueConfig::service_scale() const {
    return scaling == ServiceScaling::heavy_traffic ? speed_factor() / scale_n() : 1.0;
}

double Population::service(CustomerId id) const {
    return id < services.size() ? services[id] : initial_services[id - services.size()];
}

double Population::weight(CustomerId id) const {
    return id < services.size() ? alpha_weights[id] : std::pow(initial_services[id - services.size()], alpha);
}

std::vector<std::size_t> size_biased_prefix(std::span<const double> weights, std::size_t count, Engine& rng) {
    if (count > weights.size()) throw std::invalid_argument("prefix longer than the population");
    // Exponential clocks with rates w_i ring in w-size-biased order.
    std::exponential_distribution<double> unit_exp(1.0);
    std::vector<std::pair<double, std::size_t>> clocks(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) clocks[i] = {unit_exp(rng) / weights[i], i};
    const auto mid = clocks.begin() + static_cast<std::ptrdiff_t>(count);
    std::partial_sort(clocks.begin(), mid, clocks.end());
    std::vector<std::size_t> order(count);
    for (std::size_t j = 0; j < count; ++j) order[j] = clocks[j].second;
    return order;
}

Population build_population(const QueueConfig& config, Engine& rng) {
    config.validate();
    Population pop;
    pop.alpha = config.alpha;
    pop.lambda = config.lambda();
    pop.speed_factor = config.speed_factor();
    pop.service_scale = config.service_scale();
    const std::size_t q0 = config.initial_queue_length();

    // The initial customers are the first q0 arrivals out of n + q0, so
    // their services follow the alpha-size-biased ordering.
    const std::vector<double> drawn = config.dist.sample(config.pool_size() + q0, rng);
    std::vector<double> weights(drawn.size());
    for (std::size_t i = 0; i < drawn.size(); ++i) weights[i] = std::pow(drawn[i], config.alpha);
    std::vector<char> initial(drawn.size(), 0);
    for (const std::size_t i : size_biased_prefix(weights, q0, rng)) {
        initial[i] = 1;
        pop.initial_services.push_back(drawn[i]);
    }
    pop.services.reserve(drawn.size() - q0);
    for (std::size_t i = 0; i < drawn.size(); ++i) {
        if (initial[i]) continue;
        pop.services.push_back(drawn[i]);
        pop.alpha_weights.push_back(weights[i]);
        pop.scaled_services.push_back(drawn[i] * pop.service_scale);
    }
    return pop;
}

EmbeddedChain::EmbeddedChain(const Population& population)
    : population_(population), pool_(population.pool_size()), parent_(population.customer_count(), kNoParent) {
    std::iota(pool_.begin(), pool_.end(), CustomerId{0});
    for (std::size_t j = 0; j < population.initial_count(); ++j) queue_.push_back(population.pool_size() + j);
}

StepResult EmbeddedChain::step(Engine& rng, bool track_upper) {
    CustomerId current;
    if (in_service_) {
        current = *in_service_;
        in_service_.reset();
    } else {
        if (queue_.empty()) throw EmptyQueue();
        current = queue_.front();
        queue_.pop_front();
    }
    const double duration = population_.scaled_service(current);
    const double lambda = population_.lambda;

    // Memoryless clocks: customer i arrives during this service w.p.
    // 1 - exp(-lambda S_i^alpha duration); given that, its arrival instant is
    // the uniform mapped through the truncated exponential quantile.
    joiners_.clear();
    std::size_t keep = 0;
    for (std::size_t p = 0; p < pool_.size(); ++p) {
        const CustomerId id = pool_[p];
        const double rate = lambda * population_.alpha_weights[id];
        const double prob = -std::expm1(-rate * duration);
        const double u = uniform01(rng);
        if (u < prob) {
            joiners_.emplace_back(-std::log1p(-u) / rate, id);
        } else {
            pool_[keep++] = id;
        }
    }
    pool_.resize(keep);

    std::size_t upper = joiners_.size();
    if (track_upper) {
        for (const CustomerId id : queue_) {
            const double prob = -std::expm1(-lambda * population_.weight(id) * duration);
            if (uniform01(rng) < prob) ++upper;
        }
    }

    std::sort(joiners_.begin(), joiners_.end());
    for (const auto& [instant, id] : joiners_) {
        queue_.push_back(id);
        parent_[id] = static_cast<std::int64_t>(current);
    }
    ++served_;
    return {current, joiners_.size(), upper};
}

CustomerId EmbeddedChain::idle_pick(Engine& rng) {
    if (!needs_idle_pick()) throw std::logic_error("idle pick requires an empty queue and idle server");
    if (pool_.empty()) throw PoolExhausted();
    double total = 0.0;
    for (const CustomerId id : pool_) total += population_.alpha_weights[id];
    double target = uniform01(rng) * total;
    std::size_t pick = pool_.size() - 1;
    for (std::size_t p = 0; p < pool_.size(); ++p) {
        target -= population_.alpha_weights[pool_[p]];
        if (target < 0.0) {
            pick = p;
            break;
        }
    }
    const CustomerId id = pool_[pick];
    pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(pick));
    parent_[id] = kNoParent;
    in_service_ = id;
    return id;
}

namespace {

EmbeddedPath start_path(const Population& pop) {
    EmbeddedPath path;
    const auto q0 = static_cast<std::int64_t>(pop.initial_count());
    path.arrivals.push_back(0);
    path.unreflected.push_back(q0);
    path.queue.push_back(q0);
    path.served_order.push_back(kNoParent);
    path.pool_size = pop.pool_size();
    path.initial_queue = pop.initial_count();
    if (q0 == 0) path.busy_period_ends.push_back(0);
    return path;
}

// One service of the embedded chain, recorded into `path`.
StepResult advance(EmbeddedChain& chain, EmbeddedPath& path, Engine& rng, bool track_upper) {
    if (chain.needs_idle_pick()) chain.idle_pick(rng);
    const StepResult r = chain.step(rng, track_upper);
    const auto a = static_cast<std::int64_t>(r.arrivals);
    path.arrivals.push_back(a);
    path.unreflected.push_back(path.unreflected.back() + a - 1);
    path.queue.push_back(std::max<std::int64_t>(path.queue.back() + a - 1, 0));
    path.served_order.push_back(static_cast<std::int64_t>(r.served));
    if (chain.needs_idle_pick()) path.busy_period_ends.push_back(path.steps());
    return r;
}

}  // namespace

EmbeddedPath simulate_path(const QueueConfig& config, std::size_t horizon_steps, Engine& rng) {
    if (horizon_steps < 1) throw std::invalid_argument("horizon must be at least one step");
    const Population pop = build_population(config, rng);
    EmbeddedChain chain(pop);
    EmbeddedPath path = start_path(pop);
    for (std::size_t k = 1; k <= horizon_steps && !chain.exhausted(); ++k) advance(chain, path, rng, false);
    path.parent = chain.parents();
    return path;
}

UpperBoundRun simulate_upper_bound(const QueueConfig& config, std::size_t horizon_steps, Engine& rng) {
    if (horizon_steps < 1) throw std::invalid_argument("horizon must be at least one step");
    const Population pop = build_population(config, rng);
    EmbeddedChain chain(pop);
    UpperBoundRun run;
    run.path = start_path(pop);
    run.upper_arrivals.push_back(0);
    run.upper_unreflected.push_back(run.path.unreflected.front());
    for (std::size_t k = 1; k <= horizon_steps && !chain.exhausted(); ++k) {
        const StepResult r = advance(chain, run.path, rng, true);
        const auto au = static_cast<std::int64_t>(r.upper_arrivals);
        run.upper_arrivals.push_back(au);
        run.upper_unreflected.push_back(run.upper_unreflected.back() + au - 1);
    }
    run.path.parent = chain.parents();
    return run;
}

BusyPeriodRecord make_busy_period_record(const QueueConfig& config, std::size_t customers_served) {
    BusyPeriodRecord rec;
    rec.customers_served = customers_served;
    rec.initial_queue = config.initial_queue_length();
    const double bp = static_cast<double>(customers_served);
    if (config.scaling == ServiceScaling::heavy_traffic) {
        const double c = std::cbrt(config.scale_n());
        rec.scaled_value = bp / (c * c);
    } else {
        rec.scaled_value = bp;
    }
    return rec;
}

BusyPeriodRecord simulate_first_busy_period_fast(const QueueConfig& config, Engine& rng) {
    config.validate();
    const std::size_t q0 = config.initial_queue_length();
    if (q0 < 1) throw std::invalid_argument("first busy period needs Q(0) >= 1");
    const double lambda = config.lambda();
    const double scale = config.service_scale();

    struct Arrival {
        double time;
        double service;
    };
    // Clocks of all n + q0 customers; the q0 earliest form the initial
    // queue and, by memorylessness, the rest restart at the q0-th ring.
    std::vector<Arrival> arrivals(config.pool_size() + q0);
    std::exponential_distribution<double> unit_exp(1.0);
    for (auto& a : arrivals) {
        const double s = config.dist.draw(rng);
        a.service = s * scale;
        a.time = unit_exp(rng) / (lambda * std::pow(s, config.alpha));
    }
    const auto by_time = [](const Arrival& x, const Arrival& y) { return x.time < y.time; };
    std::partial_sort(arrivals.begin(), arrivals.begin() + static_cast<std::ptrdiff_t>(q0), arrivals.end(), by_time);
    std::vector<double> fifo;
    fifo.reserve(q0 + 64);
    for (std::size_t j = 0; j < q0; ++j) fifo.push_back(arrivals[j].service);
    const double origin = arrivals[q0 - 1].time;
    arrivals.erase(arrivals.begin(), arrivals.begin() + static_cast<std::ptrdiff_t>(q0));
    for (auto& a : arrivals) a.time -= origin;

    // Arrivals are sorted lazily: [0, sorted_end) is sorted and holds every
    // arrival with time <= threshold.
    const double mean_service = config.dist.mean() * scale;
    double threshold = mean_service * static_cast<double>(4 * q0 + 64);
    std::size_t sorted_end = 0;
    auto extend = [&](double t) {
        while (threshold < t) threshold *= 2.0;
        const auto mid = std::partition(arrivals.begin() + static_cast<std::ptrdiff_t>(sorted_end), arrivals.end(),
                                        [&](const Arrival& a) { return a.time <= threshold; });
        std::sort(arrivals.begin() + static_cast<std::ptrdiff_t>(sorted_end), mid, by_time);
        sorted_end = static_cast<std::size_t>(mid - arrivals.begin());
    };
    extend(0.0);

    double work = 0.0;
    std::size_t head = 0;
    std::size_t next = 0;
    std::size_t served = 0;
    while (head < fifo.size()) {
        work += fifo[head++];
        ++served;
        if (work > threshold && sorted_end < arrivals.size()) extend(work);
        while (next < sorted_end && arrivals[next].time <= work) fifo.push_back(arrivals[next++].service);
    }
    return make_busy_period_record(config, served);
}

BusyPeriodRecord simulate_first_busy_period_stepwise(const QueueConfig& config, Engine& rng) {
    const Population pop = build_population(config, rng);
    if (pop.initial_count() < 1) throw std::invalid_argument("first busy period needs Q(0) >= 1");
    EmbeddedChain chain(pop);
    while (!chain.needs_idle_pick()) chain.step(rng);
    return make_busy_period_record(config, chain.served());
}

ForestSummary first_busy_period_forest(const EmbeddedPath& path) {
    ForestSummary forest;
    const std::size_t end = path.busy_period_ends.empty() ? path.steps() : path.busy_period_ends.front();
    std::vector<std::size_t> position(path.parent.size(), 0);
    std::vector<std::size_t> tree_of(path.parent.size(), 0);
    for (std::size_t k = 1; k <= end; ++k) {
        const auto id = static_cast<std::size_t>(path.served_order[k]);
        position[id] = k;
        const std::int64_t parent = path.parent[id];
        if (parent == kNoParent) {
            tree_of[id] = forest.tree_sizes.size();
            forest.tree_sizes.push_back(1);
            ++forest.roots;
        } else {
            const auto p = static_cast<std::size_t>(parent);
            if (position[p] == 0 || position[p] >= k) {
                forest.parents_served_first = false;
                continue;
            }
            tree_of[id] = tree_of[p];
            ++forest.tree_sizes[tree_of[id]];
        }
        ++forest.vertices;
    }
    return forest;
}

double criticality_diagnostic(std::span<const double> services) {
    if (services.empty()) throw std::invalid_argument("criticality diagnostic needs at least one service");
    double s1 = 0.0;
    double s2 = 0.0;
    for (const double s : services) {
        s1 += s;
        s2 += s * s;
    }
    return s2 / s1;
}

}  // namespace deltaq
