#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "deltaq/distributions.hpp"
#include "deltaq/queue_sim.hpp"
#include "deltaq/scaling.hpp"
#include "deltaq/stats.hpp"

namespace deltaq {

/// %.17g; round-trips every double. Infinity is written as "inf".
std::string format_double(double x);

/// Rows of k, A, N, Q, served_index, parent_index.
void write_path_csv(std::ostream& out, const EmbeddedPath& path);
/// Rows of replication, bp, scaled_bp.
void write_busy_periods_csv(std::ostream& out, std::span<const BusyPeriodRecord> records);

/// Generic numeric table; all columns must have equal length.
void write_columns_csv(std::ostream& out, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);

nlohmann::json distribution_to_json(const ServiceDistribution& dist);
/// Accepts the object form or a short string such as "exp:1".
ServiceDistribution distribution_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const DiffusionParams& p);
void from_json(const nlohmann::json& j, DiffusionParams& p);
void to_json(nlohmann::json& j, const McSummary& s);

}  // namespace deltaq
