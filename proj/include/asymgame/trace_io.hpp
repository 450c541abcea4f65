#pragma once

#include "asymgame/solver.hpp"
#include "asymgame/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <span>
#include <string>

namespace asymgame {

/// Formats a double with 17 significant digits, '.' decimal separator,
/// locale-independent.
std::string format_number(double x);

/// CSV columns: k, step_norm, dist_u, dist_v. Distance cells are empty when
/// the trace has no reference. RFC-4180-style, '\n' line endings.
void write_trace_csv(const IterateTrace& trace, const std::filesystem::path& path);

/// Same with two extra envelope columns: k, step_norm, dist_u, dist_v,
/// env_u, env_v. Envelope spans must match the trace length.
void write_trace_csv(const IterateTrace& trace, std::span<const double> env_u,
                     std::span<const double> env_v, const std::filesystem::path& path);

/// Full per-iteration vectors plus scalar columns.
nlohmann::json trace_to_json(const IterateTrace& trace);

nlohmann::json vector_to_json(const Vector& v);

}  // namespace asymgame
