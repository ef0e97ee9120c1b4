#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qtensor/assembly.hpp"

namespace qtensor {

/// Scalar multipliers of the four operator pieces of one time step.
struct StepCoefficients {
  double mass = 0.0;      // 1/dt + sigma/dt^2
  double gradient = 0.0;  // multiplies the scalar stiffness K
  double div = 0.0;       // multiplies the div form D
  double rank_one = 0.0;  // multiplies the per-node IEQ term
};

/// Symmetric positive definite operator of the linearized IEQ step,
///   A = c_m M_L + c_k K + c_d D + c_r R,
/// where R x |_z = 2 gamma_z (p_z . x_z) p_z is applied node by node.
/// Holds references to the assembled pieces; they must outlive the operator.
class StepOperator {
 public:
  StepOperator(std::span<const double> mass, const SparseMatrix& stiffness, const SparseMatrix& div_form);
  explicit StepOperator(const SpatialOperators& ops)
      : StepOperator(ops.mass, ops.stiffness, ops.div_form) {}

  void set_coefficients(const StepCoefficients& c) { coeff_ = c; }
  const StepCoefficients& coefficients() const { return coeff_; }

  /// Reduced P(Q^n(z)) per interior node, interleaved like the DOFs.
  void set_rank_one(std::vector<double> directions);
  std::span<const double> rank_one() const { return directions_; }

  std::size_t size() const { return mass_.size(); }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;

 private:
  std::span<const double> mass_;
  const SparseMatrix* stiffness_;
  const SparseMatrix* div_form_;
  StepCoefficients coeff_{};
  std::vector<double> directions_;
};

struct CgOptions {
  double tol = 1e-10;  // relative residual ||Ax - b|| <= tol ||b||
  int max_iter = 0;    // 0 selects 10 n
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. x carries the start vector in
/// and the solution out. Throws SolverError after max_iter iterations.
CgResult cg_solve(const StepOperator& A, std::span<const double> rhs, std::span<double> x,
                  const CgOptions& options = {});

/// Convenience overload starting from zero.
std::vector<double> cg_solve(const StepOperator& A, std::span<const double> rhs,
                             const CgOptions& options = {}, CgResult* info = nullptr);

}  // namespace qtensor
