#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "deltaq/rng.hpp"

namespace deltaq {

struct Deterministic {
    double value;
};

struct Exponential {
    double rate;
};

struct Hyperexponential {
    std::vector<double> probs;
    std::vector<double> rates;
};

/// Service-requirement law. Construct through the named factories, which
/// enforce positivity and (for mixtures) a normalized probability vector.
class ServiceDistribution {
public:
    using Kind = std::variant<Deterministic, Exponential, Hyperexponential>;

    static ServiceDistribution deterministic(double value);
    static ServiceDistribution exponential(double rate);
    static ServiceDistribution hyperexponential(std::vector<double> probs,
                                                std::vector<double> rates);

    /// Parses the CLI shorthand: "det:1", "exp:1", "hyperexp:0.5,0.5:0.501,250.5".
    static ServiceDistribution parse(std::string_view spec);

    const Kind& kind() const { return kind_; }
    std::string to_string() const;

    double draw(Engine& rng) const;
    std::vector<double> sample(std::size_t count, Engine& rng) const;

    /// Exact E[S^r] for r in [0, 3]; throws std::domain_error otherwise.
    double moment(double r) const;
    double mean() const { return moment(1.0); }

private:
    explicit ServiceDistribution(Kind kind) : kind_(std::move(kind)) {}

    Kind kind_;
};

}  // namespace deltaq
