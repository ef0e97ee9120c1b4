#include "qtensor/analysis.hpp"

#include <cmath>
#include <string>

#include "qtensor/errors.hpp"

namespace qtensor {

namespace {

double lumped_sq(std::span<const double> mass, std::span<const double> a, std::span<const double> b,
                 double scale) {
  double s = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double d = (a[i] - b[i]) * scale;
    s += mass[i] * d * d;
  }
  return s;
}

void require_mesh(std::size_t nodes, const StructuredMesh& mesh, const char* what) {
  if (nodes != mesh.num_nodes()) {
    throw ValidationError(std::string(what) + ": field does not live on this mesh");
  }
}

}  // namespace

EnergyRecord discrete_energy(const SimState& state, const Params& p, double dt, const SpatialOperators& ops) {
  const StructuredMesh& mesh = ops.mesh;
  const auto q = gather_interior(mesh, state.q_curr);

  EnergyRecord e;
  e.step = state.step;
  e.time = state.time;
  if (p.sigma != 0.0) {
    const auto qp = gather_interior(mesh, state.q_prev);
    e.kinetic = 0.5 * p.sigma * lumped_sq(ops.mass, q, qp, 1.0 / dt);
  }
  // (L1/2)||grad Q||^2 with the Frobenius factor 2 on reduced coordinates.
  e.elastic = p.L1 * ops.stiffness.bilinear(q, q);
  if (p.elastic_div() != 0.0) e.divergence = 0.5 * p.elastic_div() * ops.div_form.bilinear(q, q);
  double rr = 0.0;
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) rr += mesh.gamma(static_cast<int>(n)) * state.r[n] * state.r[n];
  e.auxiliary = 0.5 * rr;
  e.total = e.kinetic + e.elastic + e.divergence + e.auxiliary;
  return e;
}

void record_dissipation(const EnergyRecord& prev_energy, const SimState& prev, EnergyRecord& next_energy,
                        const SimState& next, const Params& p, double dt, const SpatialOperators& ops) {
  const StructuredMesh& mesh = ops.mesh;
  const auto q_next = gather_interior(mesh, next.q_curr);
  const auto q_curr = gather_interior(mesh, prev.q_curr);
  double defect = next_energy.total - prev_energy.total + dt * lumped_sq(ops.mass, q_next, q_curr, 1.0 / dt);
  if (p.sigma != 0.0) {
    // D_t^+ Q^n - D_t^+ Q^{n-1} = (Q^{n+1} - 2 Q^n + Q^{n-1}) / dt
    const auto q_prev = gather_interior(mesh, prev.q_prev);
    double s = 0.0;
    for (std::size_t i = 0; i < q_next.size(); ++i) {
      const double d = (q_next[i] - 2.0 * q_curr[i] + q_prev[i]) / dt;
      s += ops.mass[i] * d * d;
    }
    defect += 0.5 * p.sigma * s;
  }
  next_energy.dissipation_residual = defect;
}

double l2_norm(std::span<const double> e, const StructuredMesh& mesh) {
  require_mesh(e.size(), mesh, "l2_norm");
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const Triangle& tri = mesh.triangle(t);
    const double a = e[tri[0]], b = e[tri[1]], c = e[tri[2]];
    const double sum = a + b + c;
    s += mesh.signed_area(t) / 12.0 * (a * a + b * b + c * c + sum * sum);
  }
  return std::sqrt(s);
}

double h1_seminorm(std::span<const double> e, const StructuredMesh& mesh) {
  require_mesh(e.size(), mesh, "h1_seminorm");
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const Triangle& tri = mesh.triangle(t);
    const auto g = shape_gradients(mesh, t);
    double gx = 0.0, gy = 0.0;
    for (int v = 0; v < 3; ++v) {
      gx += e[tri[v]] * g[v].x;
      gy += e[tri[v]] * g[v].y;
    }
    s += mesh.signed_area(t) * (gx * gx + gy * gy);
  }
  return std::sqrt(s);
}

double h1_error_component(const QTensorField& a, const QTensorField& b, const StructuredMesh& mesh,
                          Component c) {
  require_mesh(a.num_nodes(), mesh, "h1_error_component");
  require_mesh(b.num_nodes(), mesh, "h1_error_component");
  std::vector<double> e(mesh.num_nodes());
  for (std::size_t n = 0; n < e.size(); ++n) e[n] = a.component(n, c) - b.component(n, c);
  const double l2 = l2_norm(e, mesh);
  const double semi = h1_seminorm(e, mesh);
  return std::sqrt(l2 * l2 + semi * semi);
}

double l2_error_scalar(const ScalarField& a, const ScalarField& b, const StructuredMesh& mesh) {
  require_mesh(a.size(), mesh, "l2_error_scalar");
  require_mesh(b.size(), mesh, "l2_error_scalar");
  std::vector<double> e(a.size());
  for (std::size_t n = 0; n < e.size(); ++n) e[n] = a[n] - b[n];
  return l2_norm(e, mesh);
}

double h1_error_field(const QTensorField& a, const QTensorField& b, const StructuredMesh& mesh) {
  const double e1 = h1_error_component(a, b, mesh, Component::q11);
  const double e2 = h1_error_component(a, b, mesh, Component::q12);
  return std::sqrt(2.0 * (e1 * e1 + e2 * e2));
}

QTensorField transfer_to_fine(const QTensorField& coarse, const NestedInjection& map, const StructuredMesh& fine) {
  if (coarse.num_nodes() != map.coarse_nodes || map.entries.size() != fine.num_nodes()) {
    throw ValidationError("transfer_to_fine: field and injection map disagree");
  }
  QTensorField out(fine.num_nodes());
  for (std::size_t n = 0; n < map.entries.size(); ++n) {
    const InjectionEntry& e = map.entries[n];
    STTensor2 v;
    for (int k = 0; k < 3; ++k) v += e.weights[k] * coarse.at(e.coarse_nodes[k]);
    out.set(n, v);
  }
  return out;
}

ScalarField transfer_to_fine(const ScalarField& coarse, const NestedInjection& map, const StructuredMesh& fine) {
  if (coarse.size() != map.coarse_nodes || map.entries.size() != fine.num_nodes()) {
    throw ValidationError("transfer_to_fine: field and injection map disagree");
  }
  ScalarField out(fine.num_nodes());
  for (std::size_t n = 0; n < map.entries.size(); ++n) {
    const InjectionEntry& e = map.entries[n];
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += e.weights[k] * coarse[e.coarse_nodes[k]];
    out[n] = v;
  }
  return out;
}

ScalarField with_zero_trace(const ScalarField& r, const StructuredMesh& mesh) {
  require_mesh(r.size(), mesh, "with_zero_trace");
  ScalarField out = r;
  for (std::size_t n = 0; n < out.size(); ++n) {
    if (mesh.is_boundary(static_cast<int>(n))) out[n] = 0.0;
  }
  return out;
}

std::vector<double> convergence_orders(std::span<const double> errors, double ratio) {
  if (!(ratio > 1.0)) throw ValidationError("convergence_orders: ratio must exceed 1");
  for (double e : errors) {
    if (!(e > 0.0)) throw ValidationError("convergence_orders: errors must be positive");
  }
  std::vector<double> orders;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    orders.push_back(std::log(errors[k] / errors[k + 1]) / std::log(ratio));
  }
  return orders;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("loglog_slope: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace qtensor
