#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tsembed/embeddings.hpp"
#include "tsembed/solvers.hpp"
#include "tsembed/timescale.hpp"

namespace tsembed::io {

/// %.17g; enough digits to round-trip any double.
std::string format_double(double v);

nlohmann::json to_json(const TimeScale& ts);
TimeScale timescale_from_json(const nlohmann::json& j);

/// One value per line under a "t" header.
void write_timescale_csv(std::ostream& os, const TimeScale& ts);
/// Accepts an optional non-numeric header line; blank lines are skipped.
TimeScale read_timescale_csv(std::istream& is);

/// Loads a scale from .json or single-column CSV, picked by extension.
TimeScale load_timescale(const std::filesystem::path& path);

/// Columns index,t,value.
void write_grid_csv(std::ostream& os, const TimeScale& ts, const GridFunction& f);
GridFunction read_grid_csv(std::istream& is, const TimeScale& ts, Domain domain);

void write_residual_csv(std::ostream& os, const TimeScale& ts, const Residual& r);
/// {kind, c_estimate, inf_norm, l2_norm_weighted}
nlohmann::json residual_summary(const TimeScale& ts, const Residual& r);

/// Columns index,t,x,v_forward,E; the last row leaves v_forward and E empty.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const Lagrangian& l);

/// {scheme, problem, steps, errors, slope, degenerate}; slope is null when degenerate.
nlohmann::json to_json(const ConvergenceReport& r);
/// Columns h,error.
void write_loglog_csv(std::ostream& os, const ConvergenceReport& r);

/// Columns index,t,E.
void write_energy_csv(std::ostream& os, const EnergySeries& s);

/// Writes text to a file, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace tsembed::io
