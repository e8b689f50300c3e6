#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numeric>

#include "deltaq/queue_sim.hpp"
#include "deltaq/stats.hpp"

using namespace deltaq;

namespace {

QueueConfig table2(std::size_t n, double alpha) {
    QueueConfig c;
    c.n = n;
    c.alpha = alpha;
    c.fixed_lambda = 0.01;
    c.scaling = ServiceScaling::none;
    c.initial_queue = 1;
    return c;
}

double mean_bp(const QueueConfig& c, std::size_t reps, std::uint64_t seed, bool fast, double* se) {
    std::vector<double> v;
    for (std::size_t r = 0; r < reps; ++r) {
        Engine rng = substream(seed, r);
        v.push_back(fast ? simulate_first_busy_period_fast(c, rng).scaled_value
                         : simulate_first_busy_period_stepwise(c, rng).scaled_value);
    }
    const McSummary s = summarize(v);
    *se = s.std_error;
    return s.mean;
}

}  // namespace

TEST_CASE("initial queue length rounds half to even") {
    QueueConfig c;
    c.q = 1.0;
    c.n = 1000;
    CHECK(c.initial_queue_length() == 10);
    c.n = 8;
    c.q = 1.25;  // 2.5
    CHECK(c.initial_queue_length() == 2);
    c.q = 1.75;  // 3.5
    CHECK(c.initial_queue_length() == 4);
    c.n = 0;
    c.q = 1.0;
    CHECK(c.initial_queue_length() == 1);
    CHECK(c.pool_size() == 0);
    c.n = 1000;
    CHECK(c.pool_size() == 990);
    c.initial_from_pool = false;
    CHECK(c.pool_size() == 1000);
}

TEST_CASE("config validation") {
    QueueConfig c;
    c.alpha = 1.2;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.alpha = 0.5;
    c.fixed_lambda = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.fixed_lambda.reset();
    c.n = 8;
    c.beta = -3.0;  // 1 + beta / 2 < 0
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("population layout and scaling") {
    QueueConfig c;
    c.n = 1000;
    c.alpha = 1.0;
    Engine rng(3);
    const Population pop = build_population(c, rng);
    CHECK(pop.pool_size() == 990);
    CHECK(pop.initial_count() == 10);
    CHECK(pop.lambda == doctest::Approx(0.5));
    CHECK(pop.service_scale == doctest::Approx(1.1 / 1000.0));
    for (std::size_t i = 0; i < pop.pool_size(); ++i) CHECK(pop.alpha_weights[i] == doctest::Approx(pop.services[i]));
    CHECK(pop.scaled_service(995) == doctest::Approx(pop.initial_services[5] * 1.1 / 1000.0));
}

TEST_CASE("initial customers follow the size-biased law") {
    // Exp(1), alpha = 1: the first pick of a large pool has mean E[S^2]/E[S] = 2.
    QueueConfig c;
    c.n = 2000;
    c.alpha = 1.0;
    c.initial_queue = 1;
    std::vector<double> first;
    for (std::size_t r = 0; r < 4000; ++r) {
        Engine rng = substream(21, r);
        first.push_back(build_population(c, rng).initial_services[0]);
    }
    const McSummary s = summarize(first);
    CHECK(std::abs(s.mean - 2.0) < 4.0 * s.std_error);
}

TEST_CASE("size-biased prefix picks without replacement") {
    const std::vector<double> w{1.0, 0.0, 3.0, 1e-300, 5.0};
    Engine rng(9);
    const auto order = size_biased_prefix(w, 3, rng);
    CHECK(order.size() == 3);
    CHECK(std::find(order.begin(), order.end(), 1) == order.end());
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    CHECK_THROWS(size_biased_prefix(w, 6, rng));
}

TEST_CASE("chain step contract") {
    QueueConfig c;
    c.n = 50;
    c.initial_queue = 0;
    Engine rng(5);
    const Population pop = build_population(c, rng);
    EmbeddedChain chain(pop);
    CHECK(chain.needs_idle_pick());
    CHECK_THROWS_AS(chain.step(rng), EmptyQueue);
    chain.idle_pick(rng);
    CHECK(chain.has_customer_in_service());
    CHECK_THROWS_AS(chain.idle_pick(rng), std::logic_error);
    chain.step(rng);
    CHECK(chain.served() == 1);

    QueueConfig empty;
    empty.n = 0;
    empty.initial_queue = 0;
    const Population none = build_population(empty, rng);
    EmbeddedChain done(none);
    CHECK(done.exhausted());
    CHECK_THROWS_AS(done.idle_pick(rng), PoolExhausted);
}

TEST_CASE("path invariants") {
    QueueConfig c;
    c.n = 3000;
    c.alpha = 0.5;
    c.dist = ServiceDistribution::hyperexponential({0.5, 0.5}, {0.501, 250.5});
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Engine rng = substream(77, seed);
        const EmbeddedPath path = simulate_path(c, 2000, rng);
        REQUIRE(path.steps() >= 1);
        std::size_t joined = 0;
        std::int64_t running_min = 0;
        for (std::size_t k = 1; k <= path.steps(); ++k) {
            CHECK(path.queue[k] == std::max<std::int64_t>(path.queue[k - 1] + path.arrivals[k] - 1, 0));
            CHECK(path.unreflected[k] == path.unreflected[k - 1] + path.arrivals[k] - 1);
            running_min = std::min(running_min, path.unreflected[k]);
            CHECK(path.queue[k] == path.unreflected[k] - running_min);
            joined += static_cast<std::size_t>(path.arrivals[k]);
        }
        CHECK(joined <= path.pool_size);
        // every customer is served at most once
        std::vector<std::int64_t> served(path.served_order.begin() + 1, path.served_order.end());
        std::sort(served.begin(), served.end());
        CHECK(std::adjacent_find(served.begin(), served.end()) == served.end());
        // busy-period ends are exactly where Q hits zero within the first excursion
        if (!path.busy_period_ends.empty()) {
            const std::size_t first = path.busy_period_ends.front();
            CHECK(path.queue[first] == 0);
            for (std::size_t k = 0; k < first; ++k) CHECK(path.queue[k] > 0);
        }
    }
}

TEST_CASE("first busy period forest") {
    QueueConfig c;
    c.n = 1000;
    c.alpha = 1.0;
    Engine rng(8);
    const EmbeddedPath path = simulate_path(c, 5000, rng);
    const ForestSummary f = first_busy_period_forest(path);
    CHECK(f.parents_served_first);
    CHECK(f.roots == path.initial_queue);
    CHECK(f.vertices == path.busy_period_ends.front());
    CHECK(std::accumulate(f.tree_sizes.begin(), f.tree_sizes.end(), std::size_t{0}) == f.vertices);
}

TEST_CASE("empty pool gives a one-step path") {
    QueueConfig c;
    c.n = 0;
    c.q = 1.0;
    Engine rng(1);
    const EmbeddedPath path = simulate_path(c, 100, rng);
    CHECK(path.steps() == 1);
    CHECK(path.queue == std::vector<std::int64_t>{1, 0});
    CHECK(path.busy_period_ends == std::vector<std::size_t>{1});
}

TEST_CASE("single-customer busy period") {
    QueueConfig c = table2(0, 0.0);
    Engine rng(1);
    CHECK(simulate_first_busy_period_fast(c, rng).customers_served == 1);
    CHECK(simulate_first_busy_period_stepwise(c, rng).customers_served == 1);
    c.initial_queue = 0;
    CHECK_THROWS_AS(simulate_first_busy_period_fast(c, rng), std::invalid_argument);
}

TEST_CASE("both simulators hit the exact small-system mean") {
    // Exact Markov-chain value for n = 10 (pool 9 plus one initial customer),
    // lambda = 0.01, Exp(1) service, alpha = 0.
    const double exact = 1.0965109240590890;
    double se = 0.0;
    const double fast = mean_bp(table2(10, 0.0), 40000, 5, true, &se);
    CHECK(std::abs(fast - exact) < 4.0 * se);
    const double step = mean_bp(table2(10, 0.0), 40000, 6, false, &se);
    CHECK(std::abs(step - exact) < 4.0 * se);

    // Same with the pool kept at n besides the initial customer.
    QueueConfig extra = table2(10, 0.0);
    extra.initial_from_pool = false;
    const double fast_extra = mean_bp(extra, 40000, 7, true, &se);
    CHECK(std::abs(fast_extra - 1.1083550845387752) < 4.0 * se);
}

TEST_CASE("busy period record scaling") {
    QueueConfig c;
    c.n = 1000;
    const BusyPeriodRecord r = make_busy_period_record(c, 250);
    CHECK(r.scaled_value == doctest::Approx(2.5));
    CHECK(make_busy_period_record(table2(10, 0.0), 7).scaled_value == 7.0);
}

TEST_CASE("criticality diagnostic") {
    const std::vector<double> s{1.0, 2.0, 3.0};
    CHECK(criticality_diagnostic(s) == doctest::Approx(14.0 / 6.0));
    CHECK_THROWS(criticality_diagnostic(std::vector<double>{}));
}
