#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "qtensor/analysis.hpp"
#include "qtensor/assembly.hpp"
#include "qtensor/mesh.hpp"
#include "qtensor/model.hpp"
#include "qtensor/solver.hpp"
#include "qtensor/stepper.hpp"

namespace qtensor {

enum class ExperimentKind { run, space, time, sigma };
enum class InitialData { benchmark, zero };

inline constexpr double kNoPerturbation = std::numeric_limits<double>::infinity();

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::run;
  Rectangle domain{0.0, 2.0, 0.0, 2.0};
  int nx = 16;
  int ny = 16;
  double dt = 1e-3;
  double final_time = 0.1;
  Params params{};
  InitialData initial = InitialData::benchmark;

  // Space refinement: coarse meshes h = 2^-k for k in space_levels, compared
  // against h = 2^-reference_level.
  std::vector<int> space_levels{1, 2, 3, 4, 5};
  int reference_level = 7;

  // Time refinement on the (nx, ny) mesh.
  std::vector<double> time_steps{4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4};
  double reference_dt = 6.25e-5;

  // Zero-inertia study. Exponent kNoPerturbation leaves the data unperturbed.
  std::vector<double> sigmas{};
  std::vector<double> p1{0.5, 1.0, kNoPerturbation};
  std::vector<double> p2{0.5, kNoPerturbation};

  double cg_tol = 1e-10;
  int cg_max_iter = 0;
  int workers = 1;
  std::string output_dir = "out";

  /// Throws ValidationError naming the offending key.
  void validate() const;

  CgOptions cg() const { return {cg_tol, cg_max_iter}; }
};

/// Benchmark profile of the given study kind: Omega = [0,2]^2, L1 = 0.001,
/// L2 = L3 = 0, a = -0.2, b = 1, c = 1, A0 = 500 and the per-study mesh,
/// time step and sigma settings.
ExperimentConfig default_config(ExperimentKind kind);

/// Default zero-inertia sweep 10^-3, 10^-2.5, ..., 10^-1.
std::vector<double> default_sigma_sweep();

/// N = T / dt; throws ValidationError unless it is an integer to 1e-12.
int step_count(double final_time, double dt);

/// Q0 = n0 n0^T - |n0|^2 I / 2 with n0 = (x(2-x)y(2-y), sin(pi x) sin(pi y / 2)).
STTensor2 benchmark_q0(double x, double y);

QTensorField initial_field(const StructuredMesh& mesh, InitialData kind);

struct RunDiagnostics {
  int runs = 0;
  bool energy_monotone = true;
  double max_energy_increase = -std::numeric_limits<double>::infinity();
  /// max |dissipation residual| / E^0 over all steps.
  double max_relative_residual = 0.0;
  int max_cg_iterations = 0;

  void merge(const RunDiagnostics& other);
};

struct RunResult {
  SimState final_state;
  std::vector<EnergyRecord> trace;
  RunDiagnostics diagnostics;
};

/// Steps `start` until `target_step`, tracking energy and the dissipation
/// identity at every step. The trace is kept only when requested.
RunResult simulate(const Stepper& stepper, SimState start, int target_step, bool keep_trace);

RunResult run_single(const ExperimentConfig& config);

struct RefinementRow {
  double level = 0.0;  // h or dt
  double error_q11 = 0.0;
  double error_q12 = 0.0;
  double error_r = 0.0;
  double order_q11 = std::numeric_limits<double>::quiet_NaN();
  double order_q12 = std::numeric_limits<double>::quiet_NaN();
  double order_r = std::numeric_limits<double>::quiet_NaN();
};

struct RefinementTable {
  std::vector<RefinementRow> rows;
  RunDiagnostics diagnostics;

  double mean_order_q11() const;
  double mean_order_q12() const;
  double mean_order_r() const;
};

/// H^1 errors of q1, q2 and the L^2 error of r at T against a fine-mesh
/// reference. Coarse solutions are prolonged onto the reference lattice; r
/// is compared through its zero-trace representative.
RefinementTable space_refinement_study(const ExperimentConfig& config);

/// Same errors on one mesh against a small-dt reference.
RefinementTable time_refinement_study(const ExperimentConfig& config);

struct SigmaCase {
  double p1 = kNoPerturbation;
  double p2 = kNoPerturbation;
  std::vector<double> sigmas;
  std::vector<double> errors;
  double slope = 0.0;
};

struct SigmaStudy {
  std::vector<SigmaCase> cases;
  RunDiagnostics diagnostics;
};

/// ||Q_h(T) - Q_h^sigma(T)||_{H^1} between the parabolic solution and the
/// inertial solutions started from Q_0 + (sigma^p1 / 2) diag(1, -1) and
/// Q_t0 + (sigma^p2 / 2) diag(1, -1), perturbations at interior nodes only.
SigmaStudy sigma_study(const ExperimentConfig& config);

/// Runs fn(0..n-1) on up to `workers` threads. Exceptions are rethrown for
/// the lowest failing index after all tasks finish.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    for (std::size_t w = 0; w < count; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace qtensor
