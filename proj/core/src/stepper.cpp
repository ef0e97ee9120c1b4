#include "qtensor/stepper.hpp"

#include <string>

#include "qtensor/errors.hpp"

namespace qtensor {

ScalarField auxiliary_field(const StructuredMesh& mesh, const QTensorField& q, const Params& p) {
  ScalarField r(mesh.num_nodes());
  for (std::size_t n = 0; n < r.size(); ++n) r[n] = aux_r(q.at(n), p);
  return r;
}

QTensorField default_time_derivative(const SpatialOperators& ops, const Params& p,
                                     const QTensorField& q0, const ScalarField& r0) {
  const StructuredMesh& mesh = ops.mesh;
  const auto dofs = gather_interior(mesh, q0);
  const auto kq = ops.stiffness.multiply(dofs);
  std::vector<double> qt(dofs.size());
  const auto interior = mesh.interior_nodes();
  for (std::size_t k = 0; k < interior.size(); ++k) {
    const int z = interior[k];
    const STTensor2 bulk = r0[z] * aux_P(q0.at(z), p);
    const double inv_gamma = 1.0 / mesh.gamma(z);
    qt[2 * k] = -p.L1 * kq[2 * k] * inv_gamma - bulk.q1;
    qt[2 * k + 1] = -p.L1 * kq[2 * k + 1] * inv_gamma - bulk.q2;
  }
  QTensorField out(mesh.num_nodes());
  scatter_interior(mesh, qt, out);
  return out;
}

Stepper::Stepper(const SpatialOperators& ops, const Params& params, double dt, CgOptions cg)
    : ops_(&ops), params_(params), dt_(dt), cg_(cg) {
  params_.validate();
  if (!(dt > 0.0)) throw ValidationError("Stepper: dt must be positive");
}

SimState Stepper::initialize(const QTensorField& q0, const QTensorField& qt0) const {
  const StructuredMesh& mesh = ops_->mesh;
  if (q0.num_nodes() != mesh.num_nodes()) throw ValidationError("initialize: q0 does not match the mesh");

  SimState s;
  // Re-scatter to force homogeneous Dirichlet values.
  scatter_interior(mesh, gather_interior(mesh, q0), s.q_curr);
  s.r = auxiliary_field(mesh, s.q_curr, params_);
  s.q_prev = s.q_curr;
  if (parabolic()) return s;

  if (qt0.num_nodes() != mesh.num_nodes()) throw ValidationError("initialize: qt0 does not match the mesh");
  QTensorField q1(mesh.num_nodes());
  for (int z : mesh.interior_nodes()) {
    const STTensor2 q = s.q_curr.at(z);
    const STTensor2 next = q + dt_ * qt0.at(z);
    q1.set(z, next);
    s.r[z] += frob_dot(aux_P(q, params_), next - q);
  }
  s.q_curr = std::move(q1);
  s.step = 1;
  s.time = dt_;
  return s;
}

SimState Stepper::initialize(const TensorFunction& q0, const TensorFunction& qt0) const {
  const StructuredMesh& mesh = ops_->mesh;
  return initialize(interpolate(mesh, q0), parabolic() ? QTensorField(mesh.num_nodes()) : interpolate(mesh, qt0));
}

SimState Stepper::initialize(const QTensorField& q0) const {
  if (parabolic()) return initialize(q0, QTensorField(ops_->mesh.num_nodes()));
  QTensorField q = q0;
  scatter_interior(ops_->mesh, gather_interior(ops_->mesh, q0), q);
  const ScalarField r0 = auxiliary_field(ops_->mesh, q, params_);
  return initialize(q, default_time_derivative(*ops_, params_, q, r0));
}

SimState Stepper::step(const SimState& state, CgResult* info) const {
  const StructuredMesh& mesh = ops_->mesh;
  const auto& M = ops_->mass;
  const std::size_t n = M.size();
  const double sigma = params_.sigma;
  const double div_coeff = 0.5 * params_.elastic_div();

  const std::vector<double> qn = gather_interior(mesh, state.q_curr);
  std::vector<double> qprev;
  if (!parabolic()) qprev = gather_interior(mesh, state.q_prev);

  const auto interior = mesh.interior_nodes();
  std::vector<double> directions(n);
  for (std::size_t k = 0; k < interior.size(); ++k) {
    const STTensor2 pz = aux_P(state.q_curr.at(interior[k]), params_);
    directions[2 * k] = pz.q1;
    directions[2 * k + 1] = pz.q2;
  }

  const double inv_dt = 1.0 / dt_;
  const double inertia = sigma * inv_dt * inv_dt;

  std::vector<double> rhs = ops_->stiffness.multiply(qn);
  for (double& v : rhs) v *= -params_.L1;
  if (div_coeff != 0.0) {
    const auto dq = ops_->div_form.multiply(qn);
    for (std::size_t i = 0; i < n; ++i) rhs[i] -= div_coeff * dq[i];
  }
  for (std::size_t k = 0; k < interior.size(); ++k) {
    const double rz = state.r[interior[k]];
    const double p1 = directions[2 * k];
    const double p2 = directions[2 * k + 1];
    const double pq = p1 * qn[2 * k] + p2 * qn[2 * k + 1];
    for (int c = 0; c < 2; ++c) {
      const std::size_t i = 2 * k + c;
      const double pc = c == 0 ? p1 : p2;
      double v = (inv_dt + 2.0 * inertia) * M[i] * qn[i] + M[i] * (pq - rz) * pc;
      if (!parabolic()) v -= inertia * M[i] * qprev[i];
      rhs[i] += v;
    }
  }

  StepOperator A(*ops_);
  A.set_coefficients({inv_dt + inertia, params_.L1, div_coeff, 1.0});
  A.set_rank_one(directions);

  std::vector<double> x = qn;
  const CgResult result = cg_solve(A, rhs, x, cg_);
  if (info) *info = result;
  if (!all_finite(x)) {
    throw SolverError("step " + std::to_string(state.step) + ": non-finite solution", result.iterations,
                      result.relative_residual);
  }

  SimState next;
  next.q_prev = state.q_curr;
  scatter_interior(mesh, x, next.q_curr);
  next.r = state.r;
  for (std::size_t k = 0; k < interior.size(); ++k) {
    const double dq1 = x[2 * k] - qn[2 * k];
    const double dq2 = x[2 * k + 1] - qn[2 * k + 1];
    next.r[interior[k]] += 2.0 * (directions[2 * k] * dq1 + directions[2 * k + 1] * dq2);
  }
  next.step = state.step + 1;
  next.time = next.step * dt_;
  return next;
}

}  // namespace qtensor
