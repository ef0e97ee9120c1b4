#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qtensor/analysis.hpp"
#include "qtensor/experiments.hpp"

namespace qtensor::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kSolverFailure = 2 };

// CSV bodies, 17 significant digits.
std::string energy_csv(const std::vector<EnergyRecord>& trace);
std::string refinement_csv(const RefinementTable& table);
std::string sigma_csv(const SigmaStudy& study);

/// Two-column (sigma, error) data of one perturbation case.
std::string sigma_case_dat(const SigmaCase& c);
std::string sigma_case_filename(const SigmaCase& c);

/// Runs the experiment selected by config.kind and writes its files into
/// config.output_dir together with config.ini and manifest.json. A short
/// table goes to `out`, diagnostics to `err`. Files created by a failed
/// invocation are removed again.
int dispatch(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qtensor::cli
