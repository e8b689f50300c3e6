#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "deltaq/montecarlo.hpp"
#include "deltaq/stats.hpp"

using namespace deltaq;

TEST_CASE("busy-period replications: serial equals parallel, bitwise") {
    QueueConfig c;
    c.n = 500;
    c.alpha = 0.5;
    for (auto method : {BusyPeriodMethod::timeline, BusyPeriodMethod::stepwise}) {
        const auto s = busy_period_replications(c, 300, 99, Execution::serial, method);
        const auto p = busy_period_replications(c, 300, 99, Execution::parallel, method);
        REQUIRE(s.size() == p.size());
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].customers_served == p[i].customers_served);
    }
}

TEST_CASE("growing the replication count keeps earlier replications") {
    QueueConfig c;
    c.n = 300;
    const auto few = busy_period_replications(c, 50, 4, Execution::serial);
    const auto more = busy_period_replications(c, 120, 4, Execution::parallel);
    for (std::size_t i = 0; i < few.size(); ++i) CHECK(few[i].customers_served == more[i].customers_served);
}

TEST_CASE("hitting-time replications: serial equals parallel") {
    DiffusionParams p;
    p.sigma = std::sqrt(2.0);
    HittingOptions o;
    o.dt = 1e-3;
    const auto s = hitting_time_replications(p, o, 200, 3, Execution::serial);
    const auto q = hitting_time_replications(p, o, 200, 3, Execution::parallel);
    CHECK(s == q);
    const auto pairs_s = hitting_time_pair_replications(p, 2e-3, 20.0, 100, 3, Execution::serial);
    const auto pairs_p = hitting_time_pair_replications(p, 2e-3, 20.0, 100, 3, Execution::parallel);
    CHECK(pairs_s == pairs_p);
}

TEST_CASE("path means: serial equals parallel and the coupling holds") {
    QueueConfig c;
    c.n = 1000;
    c.alpha = 1.0;
    const std::vector<double> grid{0.0, 0.5, 1.0, 1.5};
    const PathMeans s = rescaled_path_means(c, grid, 60, 12, Execution::serial);
    const PathMeans p = rescaled_path_means(c, grid, 60, 12, Execution::parallel);
    CHECK(s.queue == p.queue);
    CHECK(s.unreflected == p.unreflected);
    CHECK(s.upper == p.upper);
    CHECK(s.coupling_violations == 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(s.unreflected[i] <= s.upper[i]);
        CHECK(s.queue[i] >= s.unreflected[i] - 1e-12);
    }
    CHECK(s.queue[0] == doctest::Approx(1.0));  // Q(0) = 10 = n^{1/3}
}

TEST_CASE("reflected diffusion means") {
    DiffusionParams p;
    p.sigma = 0.0;
    const std::vector<double> grid{0.0, 1.0, 2.0, 3.0};
    const auto m = reflected_diffusion_means(p, grid, 1e-3, 3, 1, Execution::parallel);
    CHECK(m[0] == doctest::Approx(1.0));
    CHECK(m[1] == doctest::Approx(1.5));
    CHECK(m[2] == doctest::Approx(1.0));
    CHECK(m[3] == doctest::Approx(0.0));
    DiffusionParams noisy;
    noisy.sigma = 1.0;
    const auto a = reflected_diffusion_means(noisy, grid, 1e-3, 40, 2, Execution::serial);
    const auto b = reflected_diffusion_means(noisy, grid, 1e-3, 40, 2, Execution::parallel);
    CHECK(a == b);
}

TEST_CASE("upper-bound arrivals dominate step by step") {
    QueueConfig c;
    c.n = 400;
    c.alpha = 0.5;
    for (std::uint64_t r = 0; r < 20; ++r) {
        Engine rng = substream(31, r);
        const UpperBoundRun run = simulate_upper_bound(c, 600, rng);
        for (std::size_t k = 1; k < run.upper_arrivals.size(); ++k) CHECK(run.path.arrivals[k] <= run.upper_arrivals[k]);
    }
}
