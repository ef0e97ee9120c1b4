#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qtensor/fields.hpp"
#include "qtensor/mesh.hpp"

namespace qtensor {

/// Square matrix in compressed sparse row storage.
class SparseMatrix {
 public:
  struct Triplet {
    int row;
    int col;
    double value;
  };

  SparseMatrix() = default;

  /// Duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(int dim, std::vector<Triplet> triplets);

  int dim() const { return dim_; }
  std::size_t nnz() const { return values_.size(); }

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// x^T A y.
  double bilinear(std::span<const double> x, std::span<const double> y) const;

  /// Stored value or 0.
  double at(int row, int col) const;
  std::vector<double> diagonal() const;

  /// max |A_ij - A_ji| over stored entries.
  double max_asymmetry() const;

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

 private:
  int dim_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Constant gradients of the three P1 barycentric functions on triangle t.
std::array<Point2, 3> shape_gradients(const StructuredMesh& mesh, int t);

/// Interior DOF of reduced component c at node n, -1 for boundary nodes.
inline int dof_index(const StructuredMesh& mesh, int n, int c) {
  const int k = mesh.interior_index(n);
  return k < 0 ? -1 : 2 * k + c;
}

/// Scalar P1 stiffness acting identically on the q1 and q2 DOFs, boundary
/// rows and columns eliminated. On the right-triangle lattice each interior
/// row is the 5-point stencil (4, -1, -1, -1, -1).
SparseMatrix assemble_stiffness(const StructuredMesh& mesh);

/// x^T D y = integral of div W_x . div W_y, with
/// div W = (d_x q1 + d_y q2, d_x q2 - d_y q1). Couples q1 and q2 DOFs.
SparseMatrix assemble_div_form(const StructuredMesh& mesh);

/// Lumped weights per interior DOF: 2 gamma_z, so sum_i w_i x_i y_i is the
/// mass-lumped Frobenius pairing <X, Y>_h.
std::vector<double> lumped_mass(const StructuredMesh& mesh);

/// Evaluates <alpha(W1), W2> from its three-term definition on full 2x2
/// matrices. Test oracle for the identity <alpha(W1), W2> = -2 (div W1, div W2).
double alpha_pairing(const StructuredMesh& mesh, const QTensorField& W1, const QTensorField& W2);

/// Mesh plus the operators every time step reuses. Immutable once built.
struct SpatialOperators {
  StructuredMesh mesh;
  SparseMatrix stiffness;
  SparseMatrix div_form;
  std::vector<double> mass;

  static SpatialOperators build(StructuredMesh mesh);

  std::size_t num_dofs() const { return mass.size(); }
};

}  // namespace qtensor
