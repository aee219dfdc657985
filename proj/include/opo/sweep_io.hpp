#pragma once

// CSV / JSON export of sweep results.
//
// CSV layout:
//   # config: {...}                      effective run configuration
//   t,phi,theta,G,R,n_a,n_b,N_total,K,regime
//   <one row per grid point, grid order>
//
// The JSON form carries the same config under "config" and one object per
// row under "records", with the same field names. Divergent values are
// the token `inf` (a string in JSON).

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "opo/sweep.hpp"

namespace opo {

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat f) noexcept;
OutputFormat format_from_string(std::string_view name);

/// 12 significant digits; scientific when |x| < 1e-3 or |x| >= 1e6,
/// "0" for zero, "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double x);

nlohmann::json to_json(const CavityParams& p);
CavityParams params_from_json(const nlohmann::json& j);

/// Effective configuration echoed into every output file. Excludes the
/// output path so a file can be regenerated anywhere.
nlohmann::json sweep_config(const SweepPlan& plan, OutputFormat format);
SweepPlan plan_from_config(const nlohmann::json& config);
OutputFormat format_from_config(const nlohmann::json& config);

void write_csv(std::ostream& os, const SweepResult& result, const nlohmann::json& config);
void write_json(std::ostream& os, const SweepResult& result, const nlohmann::json& config);
void write_sweep(std::ostream& os, const SweepResult& result, const nlohmann::json& config, OutputFormat format);

/// Reads the echoed configuration back from a CSV or JSON sweep file.
nlohmann::json read_config(std::istream& is);

}  // namespace opo
