#include "deltaq/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <type_traits>
#include <variant>

namespace deltaq {

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_path_csv(std::ostream& out, const EmbeddedPath& path) {
    out << "k,A,N,Q,served_index,parent_index\n";
    for (std::size_t k = 0; k < path.queue.size(); ++k) {
        const std::int64_t served = path.served_order[k];
        const std::int64_t parent = served < 0 ? kNoParent : path.parent[static_cast<std::size_t>(served)];
        out << k << ',' << path.arrivals[k] << ',' << path.unreflected[k] << ',' << path.queue[k] << ',' << served
            << ',' << parent << '\n';
    }
}

void write_busy_periods_csv(std::ostream& out, std::span<const BusyPeriodRecord> records) {
    out << "replication,bp,scaled_bp\n";
    for (std::size_t r = 0; r < records.size(); ++r)
        out << r << ',' << records[r].customers_served << ',' << format_double(records[r].scaled_value) << '\n';
}

void write_columns_csv(std::ostream& out, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw std::invalid_argument("header and column counts differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw std::invalid_argument("columns have different lengths");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << format_double(columns[i][r]);
        out << '\n';
    }
}

nlohmann::json distribution_to_json(const ServiceDistribution& dist) {
    return std::visit(
        [](const auto& d) -> nlohmann::json {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return {{"kind", "deterministic"}, {"value", d.value}};
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return {{"kind", "exponential"}, {"rate", d.rate}};
            } else {
                return {{"kind", "hyperexponential"}, {"probs", d.probs}, {"rates", d.rates}};
            }
        },
        dist.kind());
}

ServiceDistribution distribution_from_json(const nlohmann::json& j) {
    if (j.is_string()) return ServiceDistribution::parse(j.get<std::string>());
    if (!j.is_object() || !j.contains("kind")) throw std::invalid_argument("distribution needs a \"kind\"");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "deterministic" || kind == "det") return ServiceDistribution::deterministic(j.at("value").get<double>());
    if (kind == "exponential" || kind == "exp") return ServiceDistribution::exponential(j.value("rate", 1.0));
    if (kind == "hyperexponential" || kind == "hyperexp")
        return ServiceDistribution::hyperexponential(j.at("probs").get<std::vector<double>>(),
                                                     j.at("rates").get<std::vector<double>>());
    throw std::invalid_argument("unknown distribution kind: " + kind);
}

void to_json(nlohmann::json& j, const DiffusionParams& p) {
    j = {{"q", p.q}, {"beta", p.beta}, {"gamma", p.gamma}, {"sigma", p.sigma}};
}

void from_json(const nlohmann::json& j, DiffusionParams& p) {
    p.q = j.at("q").get<double>();
    p.beta = j.at("beta").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.sigma = j.at("sigma").get<double>();
}

void to_json(nlohmann::json& j, const McSummary& s) {
    j = {{"count", s.count},
         {"mean", s.mean},
         {"std_error", s.std_error},
         {"ci95", {s.ci_low, s.ci_high}},
         {"degenerate_ci", s.count < 2}};
}

}  // namespace deltaq
