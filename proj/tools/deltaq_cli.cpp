#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "deltaq/diffusion_sim.hpp"
#include "deltaq/errors.hpp"
#include "deltaq/fpt_density.hpp"
#include "deltaq/invariants.hpp"
#include "deltaq/io.hpp"
#include "deltaq/montecarlo.hpp"
#include "deltaq/queue_sim.hpp"
#include "deltaq/scaling.hpp"
#include "deltaq/stats.hpp"

using namespace deltaq;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Output {
    std::string path;
    std::ofstream file;

    std::ostream& stream() {
        if (path.empty() || path == "-") return std::cout;
        if (!file.is_open()) {
            file.open(path);
            if (!file) throw UsageError("cannot open output file " + path);
        }
        return file;
    }
};

void emit_summary(const std::string& path, const json& j) {
    if (path.empty()) {
        std::cerr << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot open summary file " + path);
    f << j.dump(2) << '\n';
}

struct QueueFlags {
    std::size_t n = 1000;
    double alpha = 0.0;
    double beta = 1.0;
    double q = 1.0;
    std::string dist = "exp:1";
    std::optional<double> lambda;
    std::optional<std::size_t> initial_queue;
    bool pool_extra = false;

    void add(CLI::App* app) {
        app->add_option("--n", n, "Population size")->capture_default_str();
        app->add_option("--alpha", alpha, "Arrival-rate exponent in [0,1]")->capture_default_str();
        app->add_option("--beta", beta, "Position in the critical window")->capture_default_str();
        app->add_option("--q", q, "Initial queue, in units of n^{1/3}")->capture_default_str();
        app->add_option("--dist", dist, "det:v | exp:rate | hyperexp:p1,p2:r1,r2")->capture_default_str();
        app->add_option("--lambda", lambda, "Fixed arrival rate: unscaled service times, Q(0)=round(q)");
        app->add_option("--initial-queue", initial_queue, "Override Q(0)");
        app->add_flag("--pool-extra", pool_extra, "Keep n customers in the pool besides the initial ones");
    }

    QueueConfig config() const {
        QueueConfig c;
        c.n = n;
        c.alpha = alpha;
        c.beta = beta;
        c.q = q;
        c.dist = ServiceDistribution::parse(dist);
        c.initial_from_pool = !pool_extra;
        if (lambda) {
            c.fixed_lambda = *lambda;
            c.scaling = ServiceScaling::none;
            c.initial_queue = static_cast<std::size_t>(std::nearbyint(q));
        }
        if (initial_queue) c.initial_queue = *initial_queue;
        c.validate();
        return c;
    }
};

/// Diffusion parameters given raw or derived from a service law.
struct DiffusionFlags {
    std::optional<std::string> dist;
    double alpha = 0.0;
    double q = 1.0;
    double beta = 1.0;
    std::optional<double> gamma;
    std::optional<double> sigma;
    std::optional<double> sigma2;

    void add(CLI::App* app) {
        app->add_option("--dist", dist, "Derive gamma and sigma from this service law");
        app->add_option("--alpha", alpha, "Used with --dist")->capture_default_str();
        app->add_option("--q", q)->capture_default_str();
        app->add_option("--beta", beta)->capture_default_str();
        app->add_option("--gamma", gamma);
        app->add_option("--sigma", sigma);
        app->add_option("--sigma2", sigma2, "Variance instead of --sigma");
    }

    DiffusionParams params() const {
        DiffusionParams p;
        if (dist) {
            if (gamma || sigma || sigma2) throw UsageError("give either --dist or --gamma/--sigma, not both");
            const auto d = ServiceDistribution::parse(*dist);
            p = diffusion_params(d, alpha, analytic_lambda(d, alpha), beta, q);
        } else {
            if (!gamma || !(sigma || sigma2)) throw UsageError("need --dist or both --gamma and --sigma/--sigma2");
            if (sigma && sigma2) throw UsageError("give only one of --sigma and --sigma2");
            p.q = q;
            p.beta = beta;
            p.gamma = *gamma;
            p.sigma = sigma ? *sigma : std::sqrt(*sigma2);
        }
        p.validate();
        return p;
    }
};

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points < 2 || !(hi > lo)) throw UsageError("grid needs at least two points and tmax > tmin");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

// Flags named in a --config JSON file are inserted right after the
// subcommand so that anything given on the command line wins.
std::vector<std::string> expand_config(int argc, char** argv, const std::vector<std::string>& commands) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!config_path) return args;

    std::ifstream in(*config_path);
    if (!in) throw UsageError("cannot read config file " + *config_path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");

    auto is_command = [&](const std::string& s) { return std::find(commands.begin(), commands.end(), s) != commands.end(); };
    auto pos = std::find_if(args.begin(), args.end(), is_command);
    if (pos == args.end()) {
        if (!cfg.contains("command")) throw UsageError("no subcommand given on the command line or in the config");
        args.insert(args.begin(), cfg.at("command").get<std::string>());
        pos = args.begin();
    }

    std::vector<std::string> extra;
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command") continue;
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) extra.push_back(flag);
        } else if (key == "dist" && value.is_object()) {
            extra.push_back(flag);
            extra.push_back(distribution_from_json(value).to_string());
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
            extra.push_back(flag);
            extra.push_back(joined);
        } else {
            extra.push_back(flag);
            extra.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    args.insert(pos + 1, extra.begin(), extra.end());
    return args;
}

int run_sample_path(const QueueFlags& qf, std::uint64_t seed, std::size_t steps_override, double horizon,
                    std::optional<double> grid, Output& out) {
    const QueueConfig c = qf.config();
    const bool scaled = c.scaling == ServiceScaling::heavy_traffic;
    const double n = c.scale_n();
    const double time_scale = std::cbrt(n) * std::cbrt(n);
    std::size_t steps = steps_override;
    if (steps == 0) steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horizon * time_scale)));
    Engine rng = substream(seed, 0);
    const EmbeddedPath path = simulate_path(c, steps, rng);
    std::ostream& os = out.stream();

    if (!scaled) {
        if (grid) throw UsageError("--grid needs the heavy-traffic scaling");
        write_path_csv(os, path);
        return 0;
    }
    const DiffusionParams dp = diffusion_params(c.dist, c.alpha, c.lambda(), c.beta, c.q);
    const ScaledPath qs(path.queue, n);
    if (grid) {
        if (!(*grid > 0.0)) throw UsageError("--grid must be positive");
        const ScaledPath ns(path.unreflected, n);
        std::vector<std::vector<double>> cols(4);
        const auto count = static_cast<std::size_t>(std::floor(qs.horizon() / *grid * (1.0 - 1e-12)));
        for (std::size_t i = 0; i <= count; ++i) {
            const double t = static_cast<double>(i) * *grid;
            cols[0].push_back(t);
            cols[1].push_back(qs(t));
            cols[2].push_back(ns(t));
            cols[3].push_back(dp.drift(t));
        }
        write_columns_csv(os, {"t", "Q_scaled", "N_scaled", "drift"}, cols);
        return 0;
    }
    os << "k,A,N,Q,served_index,parent_index,t,Q_scaled,drift\n";
    for (std::size_t k = 0; k < path.queue.size(); ++k) {
        const std::int64_t served = path.served_order[k];
        const std::int64_t parent = served < 0 ? kNoParent : path.parent[static_cast<std::size_t>(served)];
        const double t = static_cast<double>(k) / time_scale;
        os << k << ',' << path.arrivals[k] << ',' << path.unreflected[k] << ',' << path.queue[k] << ',' << served << ','
           << parent << ',' << format_double(t) << ',' << format_double(static_cast<double>(path.queue[k]) / std::cbrt(n))
           << ',' << format_double(dp.drift(t)) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo and exact busy-period computations for the Delta^alpha_(i)/G/1 queue"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--config", "JSON file whose keys mirror the flags (command line wins)");

    std::uint64_t seed = 0;
    int threads = 0;
    Output out;
    std::string summary_path;
    auto common = [&](CLI::App* sub, bool stochastic) {
        if (stochastic) sub->add_option("--seed", seed, "Master seed")->required();
        sub->add_option("--threads", threads, "OpenMP threads (0: runtime default)");
        sub->add_option("--out", out.path, "CSV output file (default stdout)");
    };

    // sample-path
    QueueFlags sp_queue;
    std::size_t sp_steps = 0;
    double sp_horizon = 3.0;
    std::optional<double> sp_grid;
    auto* sp = app.add_subcommand("sample-path", "One path of the embedded queue with its drift curve");
    sp_queue.add(sp);
    common(sp, true);
    sp->add_option("--steps", sp_steps, "Number of services (default horizon * n^{2/3})");
    sp->add_option("--horizon", sp_horizon, "Rescaled time horizon")->capture_default_str();
    sp->add_option("--grid", sp_grid, "Resample the rescaled path on t = i * grid");

    // busy-period-mc
    QueueFlags bp_queue;
    std::size_t bp_reps = 1000;
    std::string bp_method = "timeline";
    auto* bp = app.add_subcommand("busy-period-mc", "Replications of the first busy period");
    bp_queue.add(bp);
    common(bp, true);
    bp->add_option("--reps", bp_reps)->capture_default_str();
    bp->add_option("--method", bp_method, "timeline | stepwise")->capture_default_str();
    bp->add_option("--summary", summary_path, "Summary JSON file (default stderr)");

    // airy
    DiffusionFlags ai_flags;
    bool ai_mean = false;
    bool ai_cdf = false;
    double ai_tmin = 0.0;
    double ai_tmax = 6.0;
    std::size_t ai_points = 0;
    auto* ai = app.add_subcommand("airy", "Exact first-passage density of the limit process");
    ai_flags.add(ai);
    common(ai, false);
    ai->add_flag("--mean", ai_mean, "Print the mean hitting time (4 decimals)");
    ai->add_flag("--cdf", ai_cdf, "Add a CDF column to the density CSV");
    ai->add_option("--tmin", ai_tmin)->capture_default_str();
    ai->add_option("--tmax", ai_tmax)->capture_default_str();
    ai->add_option("--points", ai_points, "Density grid size; 0 prints only the mean");

    // figure2
    QueueFlags f2_queue;
    std::vector<std::size_t> f2_ns{100, 1000, 10000};
    std::size_t f2_reps = 100000;
    double f2_tmax = 6.0;
    std::size_t f2_points = 241;
    std::optional<double> f2_bandwidth;
    auto* f2 = app.add_subcommand("figure2", "Kernel density estimates of the scaled busy period vs the exact density");
    f2_queue.add(f2);
    common(f2, true);
    f2->add_option("--ns", f2_ns, "Population sizes")->delimiter(',')->capture_default_str();
    f2->add_option("--reps", f2_reps)->capture_default_str();
    f2->add_option("--tmax", f2_tmax)->capture_default_str();
    f2->add_option("--points", f2_points)->capture_default_str();
    f2->add_option("--bandwidth", f2_bandwidth, "Fixed KDE bandwidth (default Silverman)");
    f2->add_option("--summary", summary_path, "Summary JSON file (default stderr)");

    // diffusion-mc
    DiffusionFlags dm_flags;
    HittingOptions dm_options;
    dm_options.dt = 1e-4;
    std::size_t dm_reps = 10000;
    auto* dm = app.add_subcommand("diffusion-mc", "Hitting time of zero of the reflected limit process");
    dm_flags.add(dm);
    common(dm, true);
    dm->add_option("--dt", dm_options.dt)->capture_default_str();
    dm->add_option("--horizon", dm_options.horizon)->capture_default_str();
    dm->add_option("--reps", dm_reps)->capture_default_str();
    dm->add_flag("--bridge", dm_options.bridge, "Brownian-bridge crossing correction");
    dm->add_option("--summary", summary_path, "Summary JSON file (default stderr)");

    // check
    std::uint64_t check_seed = 20240601;
    auto* ck = app.add_subcommand("check", "Run the invariant suite");
    ck->add_option("--seed", check_seed)->capture_default_str();
    ck->add_option("--threads", threads);

    std::vector<std::string> commands;
    for (const auto* sub : app.get_subcommands({})) commands.push_back(sub->get_name());

    try {
        std::vector<std::string> args = expand_config(argc, argv, commands);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (threads < 0) throw UsageError("--threads must be nonnegative");
        configure_threads(threads);

        if (*sp) return run_sample_path(sp_queue, seed, sp_steps, sp_horizon, sp_grid, out);

        if (*bp) {
            if (bp_reps < 1) throw UsageError("--reps must be at least 1");
            if (bp_method != "timeline" && bp_method != "stepwise") throw UsageError("--method is timeline or stepwise");
            const QueueConfig c = bp_queue.config();
            const auto method = bp_method == "timeline" ? BusyPeriodMethod::timeline : BusyPeriodMethod::stepwise;
            const auto records = busy_period_replications(c, bp_reps, seed, Execution::parallel, method);
            write_busy_periods_csv(out.stream(), records);
            std::vector<double> values;
            for (const auto& r : records) values.push_back(r.scaled_value);
            json j;
            j["summary"] = summarize(values);
            j["scaled"] = c.scaling == ServiceScaling::heavy_traffic;
            j["lambda"] = c.lambda();
            j["initial_queue"] = c.initial_queue_length();
            j["pool"] = c.pool_size();
            j["dist"] = distribution_to_json(c.dist);
            emit_summary(summary_path, j);
            return 0;
        }

        if (*ai) {
            const DiffusionParams p = ai_flags.params();
            const FptDensity f(p);
            if (ai_points > 0) {
                const auto grid = linspace(ai_tmin, ai_tmax, ai_points);
                std::vector<double> dens;
                std::vector<double> cdf;
                for (const double t : grid) {
                    dens.push_back(f.density(t));
                    if (ai_cdf) cdf.push_back(f.cdf(t));
                }
                if (ai_cdf)
                    write_columns_csv(out.stream(), {"t", "density", "cdf"}, {grid, dens, cdf});
                else
                    write_columns_csv(out.stream(), {"t", "density"}, {grid, dens});
            }
            if (ai_mean || ai_points == 0) {
                std::FILE* dest = ai_points > 0 && (out.path.empty() || out.path == "-") ? stderr : stdout;
                std::fprintf(dest, "%.4f\n", f.mean());
            }
            return 0;
        }

        if (*f2) {
            if (f2_reps < 1) throw UsageError("--reps must be at least 1");
            if (f2_ns.empty()) throw UsageError("--ns needs at least one value");
            const auto grid = linspace(0.0, f2_tmax, f2_points);
            std::vector<std::string> header{"t"};
            std::vector<std::vector<double>> cols{grid};
            json summary = json::object();
            std::optional<TabulatedCdf> exact_cdf;
            DiffusionParams limit;
            for (std::size_t idx = 0; idx < f2_ns.size(); ++idx) {
                QueueFlags qf = f2_queue;
                qf.n = f2_ns[idx];
                const QueueConfig c = qf.config();
                if (c.scaling != ServiceScaling::heavy_traffic) throw UsageError("figure2 needs the heavy-traffic scaling");
                if (idx == 0) {
                    limit = diffusion_params(c.dist, c.alpha, c.lambda(), c.beta, c.q);
                    exact_cdf = FptDensity(limit).tabulate_cdf();
                }
                const auto records = busy_period_replications(c, f2_reps, seed + idx, Execution::parallel);
                std::vector<double> values;
                for (const auto& r : records) values.push_back(r.scaled_value);
                header.push_back("kde_n" + std::to_string(f2_ns[idx]));
                cols.push_back(kde_gaussian(values, f2_bandwidth, grid, Execution::parallel));
                json entry;
                entry["summary"] = summarize(values);
                entry["ks_distance_to_limit"] = ks_distance(values, [&](double t) { return (*exact_cdf)(t); });
                summary["n" + std::to_string(f2_ns[idx])] = entry;
            }
            const FptDensity f(limit);
            std::vector<double> exact;
            for (const double t : grid) exact.push_back(f.density(t));
            header.push_back("exact");
            cols.push_back(exact);
            write_columns_csv(out.stream(), header, cols);
            summary["limit_params"] = limit;
            if (f2_reps < 100) summary["note"] = "few replications: wide confidence intervals";
            emit_summary(summary_path, summary);
            return 0;
        }

        if (*dm) {
            if (dm_reps < 1) throw UsageError("--reps must be at least 1");
            const DiffusionParams p = dm_flags.params();
            const auto times = hitting_time_replications(p, dm_options, dm_reps, seed, Execution::parallel);
            std::vector<double> hit;
            for (const double t : times)
                if (t != kNotHit) hit.push_back(t);
            write_columns_csv(out.stream(), {"hitting_time"}, {times});
            const double missed = 1.0 - static_cast<double>(hit.size()) / static_cast<double>(times.size());
            json j;
            j["params"] = p;
            j["dt"] = dm_options.dt;
            j["horizon"] = dm_options.horizon;
            j["fraction_beyond_horizon"] = missed;
            if (!hit.empty()) j["summary"] = summarize(hit);
            emit_summary(summary_path, j);
            if (missed > 0.01) {
                std::cerr << "error: " << missed * 100.0 << "% of paths did not hit zero before the horizon\n";
                return kExitNumerical;
            }
            return 0;
        }

        if (*ck) {
            bool ok = true;
            for (const auto& r : run_invariant_checks(check_seed)) {
                std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << (r.detail.empty() ? "" : ": " + r.detail) << '\n';
                ok = ok && r.passed;
            }
            return ok ? 0 : kExitNumerical;
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
