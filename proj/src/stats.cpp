#include "deltaq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace deltaq {

McSummary summarize(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("summary of an empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double sum = 0.0;
    for (const double x : sorted) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (const double x : sorted) ss += (x - mean) * (x - mean);
    McSummary s;
    s.count = sorted.size();
    s.mean = mean;
    s.std_error = sorted.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    s.ci_low = mean - 1.96 * s.std_error;
    s.ci_high = mean + 1.96 * s.std_error;
    return s;
}

double silverman_bandwidth(std::span<const double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("bandwidth needs at least two samples");
    const McSummary s = summarize(samples);
    const double sd = s.std_error * std::sqrt(static_cast<double>(s.count));
    if (!(sd > 0.0)) throw std::invalid_argument("bandwidth undefined for a zero-variance sample");
    return 1.06 * sd * std::pow(static_cast<double>(s.count), -0.2);
}

std::vector<double> kde_gaussian(std::span<const double> samples, std::optional<double> bandwidth,
                                 std::span<const double> grid, Execution execution) {
    if (samples.empty()) throw std::invalid_argument("kde of an empty sample");
    const double h = bandwidth ? *bandwidth : silverman_bandwidth(samples);
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("bandwidth must be positive");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double norm = 1.0 / (static_cast<double>(sorted.size()) * h * std::sqrt(2.0 * std::numbers::pi));
    const double reach = 12.0 * h;
    std::vector<double> out(grid.size());
    const auto count = static_cast<std::ptrdiff_t>(grid.size());
    auto eval = [&](std::ptrdiff_t g) {
        const double x = grid[static_cast<std::size_t>(g)];
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - reach);
        auto hi = std::upper_bound(lo, sorted.end(), x + reach);
        double sum = 0.0;
        for (auto it = lo; it != hi; ++it) {
            const double z = (x - *it) / h;
            sum += std::exp(-0.5 * z * z);
        }
        out[static_cast<std::size_t>(g)] = sum * norm;
    };
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t g = 0; g < count; ++g) eval(g);
    } else {
        for (std::ptrdiff_t g = 0; g < count; ++g) eval(g);
    }
    return out;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("KS distance of an empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double v = sorted[i];
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == v) ++j;
        const double below = static_cast<double>(i) / n;
        const double upto = static_cast<double>(j) / n;
        const double f_left = std::isfinite(v) ? cdf(std::nextafter(v, -INFINITY)) : (v > 0 ? 1.0 : 0.0);
        const double f_at = std::isfinite(v) ? cdf(v) : (v > 0 ? 1.0 : 0.0);
        d = std::max({d, std::abs(below - f_left), std::abs(upto - f_at)});
        i = j;
    }
    return d;
}

double kolmogorov_survival(double x) {
    if (!(x > 0.0)) return 1.0;
    if (x < 0.3) {
        // Theta-function form, fast for small x.
        const double pi2 = std::numbers::pi * std::numbers::pi;
        double sum = 0.0;
        for (int k = 1; k < 50; ++k) {
            const double term = std::exp(-(2 * k - 1) * (2 * k - 1) * pi2 / (8.0 * x * x));
            sum += term;
            if (term < 1e-300) break;
        }
        return 1.0 - std::sqrt(2.0 * std::numbers::pi) / x * sum;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += sign * term;
        if (term < 1e-17 * std::abs(sum)) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TwoSampleKs ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS test of an empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const auto na = static_cast<double>(x.size());
    const auto nb = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    TwoSampleKs r;
    r.statistic = d;
    r.p_value = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
    return r;
}

ChiSquare chi_square_goodness_of_fit(std::span<const std::size_t> counts, std::span<const double> probs) {
    if (counts.size() != probs.size() || counts.size() < 2) throw std::invalid_argument("need matching counts and probabilities");
    double total = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!(probs[i] > 0.0)) throw std::invalid_argument("probabilities must be positive");
        total += static_cast<double>(counts[i]);
        mass += probs[i];
    }
    if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to one");
    ChiSquare r;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = total * probs[i];
        const double d = static_cast<double>(counts[i]) - expected;
        r.statistic += d * d / expected;
    }
    r.dof = counts.size() - 1;
    r.p_value = boost::math::gamma_q(0.5 * static_cast<double>(r.dof), 0.5 * r.statistic);
    return r;
}

ChiSquare chi_square_homogeneity(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                 std::size_t min_pooled) {
    if (a.empty() || b.empty()) throw std::invalid_argument("chi-square test of an empty sample");
    std::map<std::int64_t, std::pair<double, double>> table;
    for (const auto v : a) table[v].first += 1.0;
    for (const auto v : b) table[v].second += 1.0;
    std::vector<std::pair<double, double>> cells;
    std::pair<double, double> rest{0.0, 0.0};
    for (const auto& [value, c] : table) {
        if (c.first + c.second >= static_cast<double>(min_pooled)) {
            cells.push_back(c);
        } else {
            rest.first += c.first;
            rest.second += c.second;
        }
    }
    if (rest.first + rest.second > 0.0) cells.push_back(rest);
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    ChiSquare r;
    if (cells.size() < 2) return r;
    for (const auto& [ca, cb] : cells) {
        const double pooled = (ca + cb) / (na + nb);
        const double ea = pooled * na;
        const double eb = pooled * nb;
        r.statistic += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
    }
    r.dof = cells.size() - 1;
    r.p_value = boost::math::gamma_q(0.5 * static_cast<double>(r.dof), 0.5 * r.statistic);
    return r;
}

}  // namespace deltaq
