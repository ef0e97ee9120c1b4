#pragma once

#include <span>
#include <vector>

#include "qtensor/assembly.hpp"
#include "qtensor/fields.hpp"
#include "qtensor/mesh.hpp"
#include "qtensor/model.hpp"
#include "qtensor/stepper.hpp"

namespace qtensor {

/// Summands of the discrete energy
///   E^n = (sigma/2)||D_t^+ Q^{n-1}||_h^2 + (L1/2)||grad Q^n||^2
///       + ((L2+L3)/2)||div Q^n||^2 + (1/2)||r^n||_h^2.
struct EnergyRecord {
  int step = 0;
  double time = 0.0;
  double kinetic = 0.0;
  double elastic = 0.0;
  double divergence = 0.0;
  double auxiliary = 0.0;
  double total = 0.0;
  /// E^{n+1} - E^n + dt ||D_t^+ Q^n||_h^2 + (sigma/2)||D_t^+ Q^n - D_t^+ Q^{n-1}||_h^2;
  /// zero for the first record of a run.
  double dissipation_residual = 0.0;
};

EnergyRecord discrete_energy(const SimState& state, const Params& p, double dt, const SpatialOperators& ops);

/// Fills next.dissipation_residual from the two consecutive states.
void record_dissipation(const EnergyRecord& prev_energy, const SimState& prev, EnergyRecord& next_energy,
                        const SimState& next, const Params& p, double dt, const SpatialOperators& ops);

/// Consistent-mass H^1 norm of the difference of one reduced component.
double h1_error_component(const QTensorField& a, const QTensorField& b, const StructuredMesh& mesh,
                          Component c);

/// Consistent-mass L^2 norm of the nodal difference of two scalar fields.
double l2_error_scalar(const ScalarField& a, const ScalarField& b, const StructuredMesh& mesh);

/// H^1 norm of the full tensor difference, |.|_F on reduced coordinates.
double h1_error_field(const QTensorField& a, const QTensorField& b, const StructuredMesh& mesh);

/// Scalar P1 norms with exact quadrature.
double l2_norm(std::span<const double> nodal, const StructuredMesh& mesh);
double h1_seminorm(std::span<const double> nodal, const StructuredMesh& mesh);

/// Exact P1 prolongation onto a nested finer lattice.
QTensorField transfer_to_fine(const QTensorField& coarse, const NestedInjection& map, const StructuredMesh& fine);
ScalarField transfer_to_fine(const ScalarField& coarse, const NestedInjection& map, const StructuredMesh& fine);

/// Copy with boundary nodal values set to zero: the H^1_0 representative
/// the scheme's auxiliary space uses for r.
ScalarField with_zero_trace(const ScalarField& r, const StructuredMesh& mesh);

/// order_k = log(e_k / e_{k+1}) / log(ratio). Throws on non-positive errors.
std::vector<double> convergence_orders(std::span<const double> errors, double ratio);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace qtensor
