#include "deltaq/invariants.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "deltaq/airy.hpp"
#include "deltaq/diffusion_sim.hpp"
#include "deltaq/fpt_density.hpp"
#include "deltaq/montecarlo.hpp"
#include "deltaq/scaling.hpp"
#include "deltaq/stats.hpp"

namespace deltaq {

namespace {

std::string fmt(const char* pattern, double x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

}  // namespace

std::vector<CheckResult> run_invariant_checks(std::uint64_t seed) {
    std::vector<CheckResult> out;

    double worst = 0.0;
    for (double x = -30.0; x <= 30.0; x += 0.37) {
        const AiryValues v = airy_values(x);
        worst = std::max(worst, std::abs(v.ai * v.bip - v.aip * v.bi - std::numbers::inv_pi) * std::numbers::pi);
    }
    out.push_back({"airy wronskian", worst < 1e-9, fmt("max relative deviation %.3g", worst)});

    const DiffusionParams p = diffusion_params(ServiceDistribution::exponential(1.0), 0.0, 1.0, 1.0, 1.0);
    const double mass = FptDensity(p).total_mass();
    out.push_back({"density mass", std::abs(mass - 1.0) < 1e-3, fmt("integral %.12g", mass)});

    int violations = 0;
    const auto h = ServiceDistribution::hyperexponential({0.5, 0.5}, {0.501, 250.5});
    for (const auto& d : {ServiceDistribution::exponential(1.0), h}) {
        double prev = drift_coefficient(d, 0.0);
        for (int i = 1; i <= 20; ++i) {
            const double f = drift_coefficient(d, 0.05 * i);
            if (f < prev) ++violations;
            prev = f;
        }
    }
    out.push_back({"drift coefficient monotone", violations == 0, fmt("%g violations", violations)});

    QueueConfig c;
    c.n = 200;
    c.alpha = 0.5;
    const std::vector<double> grid{0.25, 0.5, 1.0};
    const PathMeans m = rescaled_path_means(c, grid, 50, seed, Execution::serial);
    out.push_back({"upper bound coupling", m.coupling_violations == 0,
                   fmt("%g replications with N > N^U", static_cast<double>(m.coupling_violations))});

    const auto serial = busy_period_replications(c, 200, seed, Execution::serial);
    const auto parallel = busy_period_replications(c, 200, seed, Execution::parallel);
    bool same = true;
    for (std::size_t i = 0; i < serial.size(); ++i) same = same && serial[i].customers_served == parallel[i].customers_served;
    out.push_back({"serial and parallel replications agree", same, ""});

    Engine rng = substream(seed, 1);
    Engine path_rng = substream(seed, 2);
    const EmbeddedPath path = simulate_path(c, 400, path_rng);
    bool recursion = true;
    for (std::size_t k = 1; k <= path.steps(); ++k)
        recursion = recursion && path.queue[k] == std::max<std::int64_t>(path.queue[k - 1] + path.arrivals[k] - 1, 0);
    const ForestSummary forest = first_busy_period_forest(path);
    out.push_back({"queue recursion and forest", recursion && forest.parents_served_first &&
                                                      forest.roots == path.initial_queue,
                   ""});

    const DiffusionPath w = simulate_w(p, 2.0, 1e-3, rng);
    const auto twice = reflect(w.reflected);
    bool idempotent = twice == w.reflected;
    for (const double v : w.reflected) idempotent = idempotent && v >= 0.0;
    out.push_back({"reflection nonnegative and idempotent", idempotent, ""});

    return out;
}

}  // namespace deltaq
