#pragma once

#include "qtensor/assembly.hpp"
#include "qtensor/fields.hpp"
#include "qtensor/model.hpp"
#include "qtensor/solver.hpp"

namespace qtensor {

/// Two-level state (Q^{n-1}, Q^n, r^n) of the mass-lumped IEQ scheme.
///
/// Q fields vanish on the boundary. r is kept at every node; on the boundary
/// it stays at its initial value sqrt(2 A0). The parabolic branch never reads
/// q_prev but still records the previous level in it so that energy
/// bookkeeping is uniform across both branches.
struct SimState {
  QTensorField q_prev;
  QTensorField q_curr;
  ScalarField r;
  int step = 0;
  double time = 0.0;
};

/// r(Q(z)) at every node.
ScalarField auxiliary_field(const StructuredMesh& mesh, const QTensorField& q, const Params& p);

/// Discrete realization of Q_t(0) = L1 Lap Q(0) - r(0) P(Q(0)) with the
/// lumped Laplacian (Lap q)_z = -(K q)_z / gamma_z. Boundary values are zero.
QTensorField default_time_derivative(const SpatialOperators& ops, const Params& p,
                                     const QTensorField& q0, const ScalarField& r0);

/// Advances the linearly implicit scheme. Each step eliminates r^{n+1}
/// pointwise and solves one SPD system for Q^{n+1}:
///
///   [c_m M_L + L1 K + ((L2+L3)/2) D + R_n] Q^{n+1}
///     = (1/dt + 2 sigma/dt^2) M_L Q^n - (sigma/dt^2) M_L Q^{n-1}
///       - L1 K Q^n - ((L2+L3)/2) D Q^n - M_L (r^n P^n) + R_n Q^n,
///
/// with c_m = 1/dt + sigma/dt^2 and R_n the lumped rank-one term built from
/// P(Q^n). K is the scalar stiffness, so the Frobenius gradient pairing
/// (L1/2)<grad Q, grad Phi> contributes L1 K on reduced coordinates.
/// Then r^{n+1} = r^n + P(Q^n):(Q^{n+1} - Q^n) at every node.
class Stepper {
 public:
  Stepper(const SpatialOperators& ops, const Params& params, double dt, CgOptions cg = {});

  const Params& params() const { return params_; }
  double dt() const { return dt_; }
  bool parabolic() const { return params_.sigma == 0.0; }
  const SpatialOperators& operators() const { return *ops_; }

  /// Q^0 = q0, r^0 = r(Q^0). For sigma > 0 also Q^1 = Q^0 + dt qt0 and the
  /// lumped r^1, returning a state at step 1; the parabolic branch returns
  /// step 0 and ignores qt0.
  SimState initialize(const QTensorField& q0, const QTensorField& qt0) const;
  SimState initialize(const TensorFunction& q0, const TensorFunction& qt0) const;

  /// initialize() with qt0 = default_time_derivative(q0).
  SimState initialize(const QTensorField& q0) const;

  SimState step(const SimState& state, CgResult* info = nullptr) const;

 private:
  const SpatialOperators* ops_;
  Params params_;
  double dt_;
  CgOptions cg_;
};

}  // namespace qtensor
