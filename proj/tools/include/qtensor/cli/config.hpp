#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "qtensor/experiments.hpp"

namespace qtensor::cli {

/// Maps `run`, `space-refine`, `time-refine` and `sigma-study` to their
/// experiment kind; std::nullopt for anything else.
std::optional<ExperimentKind> kind_from_subcommand(std::string_view name);
std::string_view subcommand_name(ExperimentKind kind);

/// Reads an INI-style config on top of default_config(kind).
///
/// Recognized sections and keys:
///
///   [mesh]        x0 x1 y0 y1 nx ny
///   [params]      L1 L2 L3 a b c A0 sigma M
///   [time]        dt T
///   [experiment]  initial (benchmark | zero), workers, output_dir
///   [solver]      cg_tol cg_max_iter
///   [space]       levels (comma list), reference_level
///   [time_refine] dts (comma list), reference_dt
///   [sigma_study] sigmas, p1, p2 (comma lists, `inf` for no perturbation)
///
/// Unknown sections or keys and malformed values throw ValidationError
/// naming the key. The result is validated before it is returned.
ExperimentConfig parse_config(std::istream& in, ExperimentKind kind);
ExperimentConfig parse_config_file(const std::filesystem::path& path, ExperimentKind kind);

/// Fully resolved config in the same format; parsing it back yields an
/// identical configuration.
std::string render_config(const ExperimentConfig& config);

}  // namespace qtensor::cli
