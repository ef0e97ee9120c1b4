#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qtensor/mesh.hpp"
#include "qtensor/model.hpp"

namespace qtensor {

enum class Component { q11 = 0, q12 = 1 };

/// Nodal coefficients of a P1 Q-tensor field over all mesh nodes,
/// stored as interleaved reduced coordinates (q1, q2) per node.
class QTensorField {
 public:
  QTensorField() = default;
  explicit QTensorField(std::size_t num_nodes) : values_(2 * num_nodes, 0.0) {}

  std::size_t num_nodes() const { return values_.size() / 2; }

  STTensor2 at(std::size_t n) const { return {values_[2 * n], values_[2 * n + 1]}; }
  void set(std::size_t n, const STTensor2& q) {
    values_[2 * n] = q.q1;
    values_[2 * n + 1] = q.q2;
  }
  double component(std::size_t n, Component c) const {
    return values_[2 * n + static_cast<std::size_t>(c)];
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const QTensorField&, const QTensorField&) = default;

 private:
  std::vector<double> values_;
};

/// Nodal coefficients of a P1 scalar field over all mesh nodes.
using ScalarField = std::vector<double>;

using TensorFunction = std::function<STTensor2(double x, double y)>;

/// Nodal interpolant with boundary nodes forced to zero (homogeneous Dirichlet).
QTensorField interpolate(const StructuredMesh& mesh, const TensorFunction& fn);

/// Interior DOF vector (2 per interior node) from a nodal field.
std::vector<double> gather_interior(const StructuredMesh& mesh, const QTensorField& field);

/// Writes interior DOFs back into a nodal field; boundary nodes are set to zero.
void scatter_interior(const StructuredMesh& mesh, std::span<const double> dofs, QTensorField& field);

/// Extracts one reduced component as a scalar nodal field.
ScalarField component_field(const QTensorField& field, Component c);

bool all_finite(std::span<const double> values);

}  // namespace qtensor
