#include "deltaq/distributions.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace deltaq {

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
            throw std::invalid_argument("bad number '" + std::string(item) + "'");
        }
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

ServiceDistribution ServiceDistribution::deterministic(double value) {
    require_positive(value, "deterministic value");
    return ServiceDistribution(Deterministic{value});
}

ServiceDistribution ServiceDistribution::exponential(double rate) {
    require_positive(rate, "exponential rate");
    return ServiceDistribution(Exponential{rate});
}

ServiceDistribution ServiceDistribution::hyperexponential(std::vector<double> probs,
                                                          std::vector<double> rates) {
    if (probs.empty() || probs.size() != rates.size()) {
        throw std::invalid_argument("hyperexponential probs/rates must be nonempty and of equal length");
    }
    for (double p : probs) {
        if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("hyperexponential prob outside [0,1]");
    }
    for (double r : rates) require_positive(r, "hyperexponential rate");
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("hyperexponential probs must sum to 1");
    }
    return ServiceDistribution(Hyperexponential{std::move(probs), std::move(rates)});
}

ServiceDistribution ServiceDistribution::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument("distribution must look like det:1, exp:1 or hyperexp:p1,p2:r1,r2");
    }
    const auto name = spec.substr(0, colon);
    const auto rest = spec.substr(colon + 1);
    if (name == "det" || name == "deterministic") {
        const auto v = parse_list(rest);
        if (v.size() != 1) throw std::invalid_argument("det takes one value");
        return deterministic(v[0]);
    }
    if (name == "exp" || name == "exponential") {
        const auto v = parse_list(rest);
        if (v.size() != 1) throw std::invalid_argument("exp takes one rate");
        return exponential(v[0]);
    }
    if (name == "hyperexp" || name == "hyperexponential") {
        const auto split = rest.find(':');
        if (split == std::string_view::npos) {
            throw std::invalid_argument("hyperexp needs probs:rates");
        }
        return hyperexponential(parse_list(rest.substr(0, split)), parse_list(rest.substr(split + 1)));
    }
    throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

std::string ServiceDistribution::to_string() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&os](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                os << "det:" << d.value;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                os << "exp:" << d.rate;
            } else {
                os << "hyperexp:";
                for (std::size_t i = 0; i < d.probs.size(); ++i) os << (i ? "," : "") << d.probs[i];
                os << ':';
                for (std::size_t i = 0; i < d.rates.size(); ++i) os << (i ? "," : "") << d.rates[i];
            }
        },
        kind_);
    return os.str();
}

double ServiceDistribution::draw(Engine& rng) const {
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return d.value;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return std::exponential_distribution<double>(d.rate)(rng);
            } else {
                double u = uniform01(rng);
                std::size_t j = 0;
                while (j + 1 < d.probs.size() && u >= d.probs[j]) {
                    u -= d.probs[j];
                    ++j;
                }
                return std::exponential_distribution<double>(d.rates[j])(rng);
            }
        },
        kind_);
}

std::vector<double> ServiceDistribution::sample(std::size_t count, Engine& rng) const {
    std::vector<double> out(count);
    for (auto& s : out) s = draw(rng);
    return out;
}

double ServiceDistribution::moment(double r) const {
    if (!(r >= 0.0 && r <= 3.0)) {
        throw std::domain_error("moment order must lie in [0, 3]");
    }
    return std::visit(
        [r](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return std::pow(d.value, r);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return std::tgamma(1.0 + r) / std::pow(d.rate, r);
            } else {
                const double g = std::tgamma(1.0 + r);
                double m = 0.0;
                for (std::size_t j = 0; j < d.probs.size(); ++j) m += d.probs[j] * g / std::pow(d.rates[j], r);
                return m;
            }
        },
        kind_);
}

}  // namespace deltaq
