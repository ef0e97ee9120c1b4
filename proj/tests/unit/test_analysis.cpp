#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qtensor/analysis.hpp"
#include "qtensor/errors.hpp"
#include "qtensor/experiments.hpp"

namespace qtensor {
namespace {

TEST(Energy, ZeroDataOnBenchmarkDomain) {
  const auto ops = SpatialOperators::build(build_mesh(0.0, 2.0, 0.0, 2.0, 16, 16));
  const Params p;
  const Stepper stepper(ops, p, 1e-3);
  const SimState s = stepper.initialize(QTensorField(ops.mesh.num_nodes()));
  const EnergyRecord e = discrete_energy(s, p, 1e-3, ops);
  EXPECT_NEAR(e.total, 2000.0, 1e-10);
  EXPECT_EQ(e.kinetic, 0.0);
  EXPECT_EQ(e.elastic, 0.0);
  EXPECT_EQ(e.divergence, 0.0);
}

TEST(Energy, SingleNodeHandValues) {
  const auto ops = SpatialOperators::build(build_mesh(0.0, 2.0, 0.0, 2.0, 2, 2));
  const int z = ops.mesh.node_index(1, 1);
  Params p;
  p.sigma = 0.1;
  p.L2 = 0.2;
  SimState s;
  s.q_prev = QTensorField(ops.mesh.num_nodes());
  s.q_curr = QTensorField(ops.mesh.num_nodes());
  s.q_prev.set(z, {0.4, -0.1});
  s.q_curr.set(z, {0.5, 0.2});
  s.r.assign(ops.mesh.num_nodes(), 2.0);
  s.r[z] = 3.0;
  const EnergyRecord e = discrete_energy(s, p, 0.1, ops);
  // gamma_z = 1, |D_t Q|_F^2 = 2 (1^2 + 3^2), |grad Q|^2 sums the 4-stencil.
  EXPECT_NEAR(e.kinetic, 0.5 * 0.1 * 20.0, 1e-12);
  EXPECT_NEAR(e.elastic, 0.001 * 4.0 * 0.29, 1e-15);
  EXPECT_NEAR(e.divergence, 0.5 * 0.2 * 4.0 * 0.29, 1e-14);
  // Boundary weights add up to 4 - 1 = 3.
  EXPECT_NEAR(e.auxiliary, 0.5 * (9.0 + 3.0 * 4.0), 1e-13);
  EXPECT_NEAR(e.total, e.kinetic + e.elastic + e.divergence + e.auxiliary, 1e-14);
}

TEST(Energy, ParabolicKineticTermIsZero) {
  const auto ops = SpatialOperators::build(build_mesh(0.0, 2.0, 0.0, 2.0, 8, 8));
  const Params p;
  const Stepper stepper(ops, p, 1e-3);
  SimState s = stepper.initialize(initial_field(ops.mesh, InitialData::benchmark));
  s = stepper.step(s);
  const EnergyRecord e = discrete_energy(s, p, 1e-3, ops);
  EXPECT_EQ(e.kinetic, 0.0);
  EXPECT_EQ(e.divergence, 0.0);
  EXPECT_GT(e.elastic, 0.0);
}

TEST(Energy, DissipationIdentityWithDivergenceTerm) {
  const auto ops = SpatialOperators::build(build_mesh(0.0, 2.0, 0.0, 2.0, 8, 8));
  Params p;
  p.sigma = 0.025;
  p.L2 = 0.004;
  p.L3 = 0.002;
  const double dt = 1e-3;
  const Stepper stepper(ops, p, dt, {1e-13, 0});
  SimState s = stepper.initialize(initial_field(ops.mesh, InitialData::benchmark));
  EnergyRecord e = discrete_energy(s, p, dt, ops);
  const double e0 = e.total;
  for (int n = 0; n < 20; ++n) {
    SimState next = stepper.step(s);
    EnergyRecord en = discrete_energy(next, p, dt, ops);
    record_dissipation(e, s, en, next, p, dt, ops);
    EXPECT_LE(std::abs(en.dissipation_residual), 1e-9 * e0);
    EXPECT_LE(en.total, e.total);
    s = std::move(next);
    e = en;
  }
}

TEST(Norms, ExactOnLinearFunctions) {
  const auto mesh = build_mesh(0.0, 2.0, 0.0, 2.0, 8, 8);
  std::vector<double> x(mesh.num_nodes());
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = mesh.node(static_cast<int>(n)).x;
  EXPECT_NEAR(l2_norm(x, mesh), std::sqrt(16.0 / 3.0), 1e-13);
  EXPECT_NEAR(h1_seminorm(x, mesh), 2.0, 1e-13);
}

TEST(Norms, ComponentAndFieldErrors) {
  const auto mesh = build_mesh(0.0, 2.0, 0.0, 2.0, 8, 8);
  QTensorField a(mesh.num_nodes()), b(mesh.num_nodes());
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) a.set(n, {0.25, 0.0});
  EXPECT_NEAR(h1_error_component(a, b, mesh, Component::q11), 0.5, 1e-14);
  EXPECT_EQ(h1_error_component(a, b, mesh, Component::q12), 0.0);
  EXPECT_NEAR(h1_error_field(a, b, mesh), std::sqrt(2.0) * 0.5, 1e-14);

  ScalarField ra(mesh.num_nodes(), 1.5), rb(mesh.num_nodes(), 1.0);
  EXPECT_NEAR(l2_error_scalar(ra, rb, mesh), 1.0, 1e-14);
}

TEST(Norms, MetricProperties) {
  const auto mesh = build_mesh(0.0, 2.0, 0.0, 2.0, 8, 8);
  const QTensorField a = initial_field(mesh, InitialData::benchmark);
  QTensorField b(mesh.num_nodes()), c(mesh.num_nodes());
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
    const auto& p = mesh.node(static_cast<int>(n));
    b.set(n, {std::sin(p.x) * p.y, p.x * p.x});
  }
  EXPECT_EQ(h1_error_field(a, a, mesh), 0.0);
  EXPECT_NEAR(h1_error_field(a, b, mesh), h1_error_field(b, a, mesh), 1e-14);
  EXPECT_LE(h1_error_field(a, b, mesh), h1_error_field(a, c, mesh) + h1_error_field(c, b, mesh) + 1e-14);
}

TEST(Norms, RejectFieldsFromOtherMeshes) {
  const auto mesh = build_mesh(0.0, 2.0, 0.0, 2.0, 8, 8);
  const QTensorField a(mesh.num_nodes()), b(10);
  EXPECT_THROW(h1_error_component(a, b, mesh, Component::q11), ValidationError);
  EXPECT_THROW(l2_error_scalar(ScalarField(3), ScalarField(3), mesh), ValidationError);
}

TEST(Transfer, ProlongationIsExactForCoarseP1Functions) {
  const auto coarse = build_mesh(0.0, 2.0, 0.0, 2.0, 4, 4);
  const auto fine = build_mesh(0.0, 2.0, 0.0, 2.0, 16, 16);
  const auto map = nested_injection(coarse, fine);
  const QTensorField qc = initial_field(coarse, InitialData::benchmark);
  const QTensorField qf = transfer_to_fine(qc, map, fine);
  // The prolonged function is the same piecewise-linear function.
  const ScalarField c1 = component_field(qc, Component::q11);
  const ScalarField f1 = component_field(qf, Component::q11);
  EXPECT_NEAR(l2_norm(c1, coarse), l2_norm(f1, fine), 1e-13);
  EXPECT_NEAR(h1_seminorm(c1, coarse), h1_seminorm(f1, fine), 1e-13);

  const ScalarField rc(coarse.num_nodes(), 7.0);
  for (double v : transfer_to_fine(rc, map, fine)) EXPECT_NEAR(v, 7.0, 1e-13);
  EXPECT_THROW(transfer_to_fine(ScalarField(3), map, fine), ValidationError);
}

TEST(Transfer, ZeroTraceRepresentative) {
  const auto mesh = build_mesh(0.0, 1.0, 0.0, 1.0, 4, 4);
  const ScalarField r(mesh.num_nodes(), 3.0);
  const ScalarField z = with_zero_trace(r, mesh);
  for (std::size_t n = 0; n < z.size(); ++n) EXPECT_EQ(z[n], mesh.is_boundary(static_cast<int>(n)) ? 0.0 : 3.0);
}

TEST(Orders, HandComputedRatios) {
  const std::vector<double> e{8.32e-4, 3.74e-4, 3.74e-4, 9.35e-5};
  const auto o = convergence_orders(e, 2.0);
  ASSERT_EQ(o.size(), 3u);
  EXPECT_NEAR(o[0], 1.1535, 1e-4);
  EXPECT_EQ(o[1], 0.0);
  EXPECT_NEAR(o[2], 2.0, 1e-12);
  EXPECT_NEAR(convergence_orders(std::vector<double>{1.0, 0.31}, 2.0)[0], 1.6897, 1e-4);
  EXPECT_NEAR(convergence_orders(std::vector<double>{1.0, 0.727}, 2.0)[0], 0.4600, 1e-4);
  EXPECT_THROW(convergence_orders(std::vector<double>{1.0, 0.0}, 2.0), ValidationError);
  EXPECT_THROW(convergence_orders(std::vector<double>{1.0, -1.0}, 2.0), ValidationError);
}

TEST(Orders, LogLogSlope) {
  const std::vector<double> x{1e-3, 1e-2, 1e-1};
  const std::vector<double> y{2e-6, 2e-5, 2e-4};
  EXPECT_NEAR(loglog_slope(x, y), 1.0, 1e-12);
  const std::vector<double> ys{3e-2, 3e-2 * std::sqrt(10.0), 3e-1};
  EXPECT_NEAR(loglog_slope(x, ys), 0.5, 1e-12);
  EXPECT_THROW(loglog_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), ValidationError);
}

}  // namespace
}  // namespace qtensor
