#include "qtensor/fields.hpp"

#include <algorithm>
#include <cmath>

namespace qtensor {

QTensorField interpolate(const StructuredMesh& mesh, const TensorFunction& fn) {
  QTensorField field(mesh.num_nodes());
  for (int n : mesh.interior_nodes()) {
    const Point2& p = mesh.node(n);
    field.set(n, fn(p.x, p.y));
  }
  return field;
}

std::vector<double> gather_interior(const StructuredMesh& mesh, const QTensorField& field) {
  std::vector<double> dofs(2 * mesh.num_interior());
  const auto values = field.values();
  const auto interior = mesh.interior_nodes();
  for (std::size_t k = 0; k < interior.size(); ++k) {
    dofs[2 * k] = values[2 * interior[k]];
    dofs[2 * k + 1] = values[2 * interior[k] + 1];
  }
  return dofs;
}

void scatter_interior(const StructuredMesh& mesh, std::span<const double> dofs, QTensorField& field) {
  if (field.num_nodes() != mesh.num_nodes()) field = QTensorField(mesh.num_nodes());
  auto values = field.values();
  std::fill(values.begin(), values.end(), 0.0);
  const auto interior = mesh.interior_nodes();
  for (std::size_t k = 0; k < interior.size(); ++k) {
    values[2 * interior[k]] = dofs[2 * k];
    values[2 * interior[k] + 1] = dofs[2 * k + 1];
  }
}

ScalarField component_field(const QTensorField& field, Component c) {
  ScalarField out(field.num_nodes());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = field.component(n, c);
  return out;
}

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace qtensor
