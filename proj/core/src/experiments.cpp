#include "qtensor/experiments.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "qtensor/errors.hpp"

namespace qtensor {

namespace {

std::string key_error(const std::string& key, const std::string& msg) { return key + ": " + msg; }

bool is_halving_chain(const std::vector<double>& v) {
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    if (std::abs(v[k] / v[k + 1] - 2.0) > 1e-9) return false;
  }
  return true;
}

int cells_for_level(double extent, int level, const char* key) {
  const double n = std::ldexp(extent, level);
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 || rounded < 2) {
    throw ValidationError(key_error(key, "h = 2^-" + std::to_string(level) + " does not tile the domain"));
  }
  return static_cast<int>(rounded);
}

StructuredMesh mesh_for_level(const Rectangle& domain, int level) {
  return build_mesh(domain, cells_for_level(domain.width(), level, "space.levels"),
                    cells_for_level(domain.height(), level, "space.levels"));
}

double mean(const std::vector<RefinementRow>& rows, double RefinementRow::*member) {
  double s = 0.0;
  int count = 0;
  for (const auto& row : rows) {
    if (std::isnan(row.*member)) continue;
    s += row.*member;
    ++count;
  }
  return count ? s / count : std::numeric_limits<double>::quiet_NaN();
}

void fill_orders(std::vector<RefinementRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double ratio = std::log(rows[k - 1].level / rows[k].level);
    auto order = [&](double RefinementRow::*e) { return std::log(rows[k - 1].*e / rows[k].*e) / ratio; };
    rows[k].order_q11 = order(&RefinementRow::error_q11);
    rows[k].order_q12 = order(&RefinementRow::error_q12);
    rows[k].order_r = order(&RefinementRow::error_r);
  }
}

QTensorField perturbed(const StructuredMesh& mesh, const QTensorField& base, double amplitude) {
  QTensorField out = base;
  if (amplitude == 0.0) return out;
  for (int z : mesh.interior_nodes()) out.set(z, base.at(z) + STTensor2{amplitude, 0.0});
  return out;
}

double perturbation_amplitude(double sigma, double exponent) {
  return std::isinf(exponent) ? 0.0 : 0.5 * std::pow(sigma, exponent);
}

}  // namespace

void ExperimentConfig::validate() const {
  params.validate();
  if (nx < 2 || ny < 2) throw ValidationError("mesh.nx/mesh.ny: need at least 2 cells per axis");
  if (std::abs(domain.width() / nx - domain.height() / ny) > 1e-12 * domain.width() / nx) {
    throw ValidationError("mesh.nx/mesh.ny: cells must be square");
  }
  if (!(final_time > 0.0)) throw ValidationError("time.T: must be positive");
  if (!(dt > 0.0)) throw ValidationError("time.dt: must be positive");
  if (!(cg_tol > 0.0)) throw ValidationError("solver.cg_tol: must be positive");
  if (cg_max_iter < 0) throw ValidationError("solver.cg_max_iter: must be nonnegative");
  if (workers < 1) throw ValidationError("experiment.workers: must be at least 1");

  if (kind != ExperimentKind::time) step_count(final_time, dt);

  if (kind == ExperimentKind::space) {
    if (space_levels.empty()) throw ValidationError("space.levels: must not be empty");
    for (std::size_t k = 0; k < space_levels.size(); ++k) {
      if (space_levels[k] >= reference_level) {
        throw ValidationError("space.levels: every level must be coarser than space.reference_level");
      }
      if (k > 0 && space_levels[k] != space_levels[k - 1] + 1) {
        throw ValidationError("space.levels: must be consecutive (a halving chain)");
      }
      cells_for_level(domain.width(), space_levels[k], "space.levels");
      cells_for_level(domain.height(), space_levels[k], "space.levels");
    }
    cells_for_level(domain.width(), reference_level, "space.reference_level");
  }
  if (kind == ExperimentKind::time) {
    if (time_steps.empty()) throw ValidationError("time_refine.dts: must not be empty");
    if (!is_halving_chain(time_steps)) throw ValidationError("time_refine.dts: must be a halving chain");
    for (double d : time_steps) {
      if (!(d > reference_dt)) throw ValidationError("time_refine.dts: every dt must exceed the reference dt");
      step_count(final_time, d);
    }
    step_count(final_time, reference_dt);
  }
  if (kind == ExperimentKind::sigma) {
    if (sigmas.size() < 2) throw ValidationError("sigma_study.sigmas: need at least two values");
    double lo = sigmas.front(), hi = sigmas.front();
    for (double s : sigmas) {
      if (!(s > 0.0)) throw ValidationError("sigma_study.sigmas: values must be strictly positive");
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (std::log10(hi / lo) < 1.5 - 1e-9) {
      throw ValidationError("sigma_study.sigmas: sweep must span at least 1.5 decades");
    }
    if (p1.empty() || p2.empty()) throw ValidationError("sigma_study.p1/p2: must not be empty");
    for (double p : p1) {
      if (!(p > 0.0)) throw ValidationError("sigma_study.p1: exponents must be positive or inf");
    }
    for (double p : p2) {
      if (!(p > 0.0)) throw ValidationError("sigma_study.p2: exponents must be positive or inf");
    }
  }
}

std::vector<double> default_sigma_sweep() {
  return {1e-3, std::pow(10.0, -2.5), 1e-2, std::pow(10.0, -1.5), 1e-1};
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.params.sigma = 0.025;
  switch (kind) {
    case ExperimentKind::run:
      c.nx = c.ny = 16;
      c.dt = 1e-3;
      break;
    case ExperimentKind::space:
      c.dt = 1.25e-4;
      break;
    case ExperimentKind::time:
      c.nx = c.ny = 32;
      break;
    case ExperimentKind::sigma:
      c.nx = c.ny = 16;
      c.dt = 1e-5;
      c.sigmas = default_sigma_sweep();
      break;
  }
  return c;
}

int step_count(double final_time, double dt) {
  const double ratio = final_time / dt;
  const double rounded = std::round(ratio);
  if (!(rounded >= 1.0) || std::abs(ratio - rounded) > 1e-12 * ratio) {
    throw ValidationError("time.dt: T / dt = " + std::to_string(ratio) + " is not an integer");
  }
  return static_cast<int>(rounded);
}

STTensor2 benchmark_q0(double x, double y) {
  using std::numbers::pi;
  const double n1 = x * (2.0 - x) * y * (2.0 - y);
  const double n2 = std::sin(pi * x) * std::sin(0.5 * pi * y);
  return {0.5 * (n1 * n1 - n2 * n2), n1 * n2};
}

QTensorField initial_field(const StructuredMesh& mesh, InitialData kind) {
  if (kind == InitialData::zero) return QTensorField(mesh.num_nodes());
  return interpolate(mesh, benchmark_q0);
}

void RunDiagnostics::merge(const RunDiagnostics& other) {
  runs += other.runs;
  energy_monotone = energy_monotone && other.energy_monotone;
  max_energy_increase = std::max(max_energy_increase, other.max_energy_increase);
  max_relative_residual = std::max(max_relative_residual, other.max_relative_residual);
  max_cg_iterations = std::max(max_cg_iterations, other.max_cg_iterations);
}

RunResult simulate(const Stepper& stepper, SimState start, int target_step, bool keep_trace) {
  const SpatialOperators& ops = stepper.operators();
  const Params& p = stepper.params();
  const double dt = stepper.dt();

  RunResult result;
  result.diagnostics.runs = 1;
  EnergyRecord energy = discrete_energy(start, p, dt, ops);
  const double e0 = energy.total;
  if (keep_trace) result.trace.push_back(energy);

  SimState state = std::move(start);
  while (state.step < target_step) {
    CgResult info;
    SimState next = stepper.step(state, &info);
    EnergyRecord next_energy = discrete_energy(next, p, dt, ops);
    record_dissipation(energy, state, next_energy, next, p, dt, ops);

    auto& d = result.diagnostics;
    const double increase = next_energy.total - energy.total;
    d.max_energy_increase = std::max(d.max_energy_increase, increase);
    if (increase > 0.0) d.energy_monotone = false;
    d.max_relative_residual = std::max(d.max_relative_residual, std::abs(next_energy.dissipation_residual) / e0);
    d.max_cg_iterations = std::max(d.max_cg_iterations, info.iterations);

    if (keep_trace) result.trace.push_back(next_energy);
    energy = next_energy;
    state = std::move(next);
  }
  result.final_state = std::move(state);
  return result;
}

RunResult run_single(const ExperimentConfig& config) {
  config.validate();
  const int steps = step_count(config.final_time, config.dt);
  const SpatialOperators ops = SpatialOperators::build(build_mesh(config.domain, config.nx, config.ny));
  const Stepper stepper(ops, config.params, config.dt, config.cg());
  return simulate(stepper, stepper.initialize(initial_field(ops.mesh, config.initial)), steps, true);
}

double RefinementTable::mean_order_q11() const { return mean(rows, &RefinementRow::order_q11); }
double RefinementTable::mean_order_q12() const { return mean(rows, &RefinementRow::order_q12); }
double RefinementTable::mean_order_r() const { return mean(rows, &RefinementRow::order_r); }

RefinementTable space_refinement_study(const ExperimentConfig& config) {
  config.validate();
  if (config.kind != ExperimentKind::space) throw ValidationError("experiment.kind: expected space");
  const int steps = step_count(config.final_time, config.dt);

  // Task 0 is the reference, tasks 1.. the coarse levels.
  const std::size_t n_tasks = config.space_levels.size() + 1;
  std::vector<std::optional<SpatialOperators>> ops(n_tasks);
  std::vector<RunResult> runs(n_tasks);
  parallel_for(n_tasks, config.workers, [&](std::size_t i) {
    const int level = i == 0 ? config.reference_level : config.space_levels[i - 1];
    ops[i].emplace(SpatialOperators::build(mesh_for_level(config.domain, level)));
    const Stepper stepper(*ops[i], config.params, config.dt, config.cg());
    runs[i] = simulate(stepper, stepper.initialize(initial_field(ops[i]->mesh, config.initial)), steps, false);
  });

  const StructuredMesh& fine = ops[0]->mesh;
  const SimState& ref = runs[0].final_state;
  const ScalarField ref_r = with_zero_trace(ref.r, fine);

  RefinementTable table;
  table.diagnostics = runs[0].diagnostics;
  for (std::size_t i = 1; i < n_tasks; ++i) {
    const StructuredMesh& coarse = ops[i]->mesh;
    const NestedInjection map = nested_injection(coarse, fine);
    const QTensorField q = transfer_to_fine(runs[i].final_state.q_curr, map, fine);
    const ScalarField r = transfer_to_fine(with_zero_trace(runs[i].final_state.r, coarse), map, fine);

    RefinementRow row;
    row.level = coarse.h();
    row.error_q11 = h1_error_component(q, ref.q_curr, fine, Component::q11);
    row.error_q12 = h1_error_component(q, ref.q_curr, fine, Component::q12);
    row.error_r = l2_error_scalar(r, ref_r, fine);
    table.rows.push_back(row);
    table.diagnostics.merge(runs[i].diagnostics);
  }
  fill_orders(table.rows);
  return table;
}

RefinementTable time_refinement_study(const ExperimentConfig& config) {
  config.validate();
  if (config.kind != ExperimentKind::time) throw ValidationError("experiment.kind: expected time");
  const SpatialOperators ops = SpatialOperators::build(build_mesh(config.domain, config.nx, config.ny));
  const QTensorField q0 = initial_field(ops.mesh, config.initial);

  std::vector<double> dts;
  dts.push_back(config.reference_dt);
  dts.insert(dts.end(), config.time_steps.begin(), config.time_steps.end());

  std::vector<RunResult> runs(dts.size());
  parallel_for(dts.size(), config.workers, [&](std::size_t i) {
    const Stepper stepper(ops, config.params, dts[i], config.cg());
    runs[i] = simulate(stepper, stepper.initialize(q0), step_count(config.final_time, dts[i]), false);
  });

  const SimState& ref = runs[0].final_state;
  const ScalarField ref_r = with_zero_trace(ref.r, ops.mesh);
  RefinementTable table;
  table.diagnostics = runs[0].diagnostics;
  for (std::size_t i = 1; i < dts.size(); ++i) {
    const SimState& s = runs[i].final_state;
    RefinementRow row;
    row.level = dts[i];
    row.error_q11 = h1_error_component(s.q_curr, ref.q_curr, ops.mesh, Component::q11);
    row.error_q12 = h1_error_component(s.q_curr, ref.q_curr, ops.mesh, Component::q12);
    row.error_r = l2_error_scalar(with_zero_trace(s.r, ops.mesh), ref_r, ops.mesh);
    table.rows.push_back(row);
    table.diagnostics.merge(runs[i].diagnostics);
  }
  fill_orders(table.rows);
  return table;
}

SigmaStudy sigma_study(const ExperimentConfig& config) {
  config.validate();
  if (config.kind != ExperimentKind::sigma) throw ValidationError("experiment.kind: expected sigma");
  const int steps = step_count(config.final_time, config.dt);
  const SpatialOperators ops = SpatialOperators::build(build_mesh(config.domain, config.nx, config.ny));
  const QTensorField q0 = initial_field(ops.mesh, config.initial);

  Params parabolic = config.params;
  parabolic.sigma = 0.0;
  const Stepper parabolic_stepper(ops, parabolic, config.dt, config.cg());

  // Q_t0 is built from the unperturbed data for every case.
  const QTensorField qt0 = default_time_derivative(ops, parabolic, q0, auxiliary_field(ops.mesh, q0, parabolic));

  struct Task {
    std::size_t case_index;
    double sigma;
  };
  SigmaStudy study;
  std::vector<Task> tasks;
  for (double a : config.p1) {
    for (double b : config.p2) {
      SigmaCase c;
      c.p1 = a;
      c.p2 = b;
      c.sigmas = config.sigmas;
      c.errors.assign(config.sigmas.size(), 0.0);
      for (double s : config.sigmas) tasks.push_back({study.cases.size(), s});
      study.cases.push_back(std::move(c));
    }
  }

  // Task 0 is the parabolic run.
  std::vector<RunResult> runs(tasks.size() + 1);
  parallel_for(tasks.size() + 1, config.workers, [&](std::size_t i) {
    if (i == 0) {
      runs[0] = simulate(parabolic_stepper, parabolic_stepper.initialize(q0), steps, false);
      return;
    }
    const Task& task = tasks[i - 1];
    const SigmaCase& c = study.cases[task.case_index];
    Params p = config.params;
    p.sigma = task.sigma;
    const Stepper stepper(ops, p, config.dt, config.cg());
    const QTensorField q0s = perturbed(ops.mesh, q0, perturbation_amplitude(task.sigma, c.p1));
    const QTensorField qt0s = perturbed(ops.mesh, qt0, perturbation_amplitude(task.sigma, c.p2));
    runs[i] = simulate(stepper, stepper.initialize(q0s, qt0s), steps, false);
  });

  study.diagnostics = runs[0].diagnostics;
  const QTensorField& reference = runs[0].final_state.q_curr;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    SigmaCase& c = study.cases[tasks[i].case_index];
    const std::size_t k = i % config.sigmas.size();
    c.errors[k] = h1_error_field(reference, runs[i + 1].final_state.q_curr, ops.mesh);
    study.diagnostics.merge(runs[i + 1].diagnostics);
  }
  for (auto& c : study.cases) c.slope = loglog_slope(c.sigmas, c.errors);
  return study;
}

}  // namespace qtensor
