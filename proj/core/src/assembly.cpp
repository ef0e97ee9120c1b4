#include "qtensor/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtensor {

SparseMatrix SparseMatrix::from_triplets(int dim, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.dim_ = dim;
  m.row_ptr_.assign(static_cast<std::size_t>(dim) + 1, 0);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());

  int last_row = -1;
  int last_col = -1;
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim) {
      throw std::out_of_range("SparseMatrix::from_triplets: index outside matrix");
    }
    if (t.row == last_row && t.col == last_col) {
      m.values_.back() += t.value;
      continue;
    }
    m.col_idx_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.row_ptr_[t.row + 1];
    last_row = t.row;
    last_col = t.col;
  }
  for (int r = 0; r < dim; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int r = 0; r < dim_; ++r) {
    double sum = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) sum += values_[k] * x[col_idx_[k]];
    y[r] = sum;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(dim_));
  multiply(x, y);
  return y;
}

double SparseMatrix::bilinear(std::span<const double> x, std::span<const double> y) const {
  double sum = 0.0;
  for (int r = 0; r < dim_; ++r) {
    double row = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) row += values_[k] * y[col_idx_[k]];
    sum += x[r] * row;
  }
  return sum;
}

double SparseMatrix::at(int row, int col) const {
  const auto begin = col_idx_.begin() + row_ptr_[row];
  const auto end = col_idx_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(dim_));
  for (int r = 0; r < dim_; ++r) d[r] = at(r, r);
  return d;
}

double SparseMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int r = 0; r < dim_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - at(col_idx_[k], r)));
    }
  }
  return worst;
}

std::array<Point2, 3> shape_gradients(const StructuredMesh& mesh, int t) {
  const Triangle& tri = mesh.triangle(t);
  const Point2& a = mesh.node(tri[0]);
  const Point2& b = mesh.node(tri[1]);
  const Point2& c = mesh.node(tri[2]);
  const double inv = 1.0 / (2.0 * mesh.signed_area(t));
  return {Point2{(b.y - c.y) * inv, (c.x - b.x) * inv},
          Point2{(c.y - a.y) * inv, (a.x - c.x) * inv},
          Point2{(a.y - b.y) * inv, (b.x - a.x) * inv}};
}

SparseMatrix assemble_stiffness(const StructuredMesh& mesh) {
  std::vector<SparseMatrix::Triplet> triplets;
  triplets.reserve(mesh.num_triangles() * 18);
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto grad = shape_gradients(mesh, t);
    const double area = mesh.signed_area(t);
    const Triangle& tri = mesh.triangle(t);
    for (int i = 0; i < 3; ++i) {
      if (mesh.is_boundary(tri[i])) continue;
      for (int j = 0; j < 3; ++j) {
        if (mesh.is_boundary(tri[j])) continue;
        const double k = area * (grad[i].x * grad[j].x + grad[i].y * grad[j].y);
        for (int c = 0; c < 2; ++c) {
          triplets.push_back({dof_index(mesh, tri[i], c), dof_index(mesh, tri[j], c), k});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(static_cast<int>(2 * mesh.num_interior()), std::move(triplets));
}

SparseMatrix assemble_div_form(const StructuredMesh& mesh) {
  std::vector<SparseMatrix::Triplet> triplets;
  triplets.reserve(mesh.num_triangles() * 36);
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto grad = shape_gradients(mesh, t);
    const double area = mesh.signed_area(t);
    const Triangle& tri = mesh.triangle(t);
    // div of the basis field carrying a unit q1 (c = 0) or q2 (c = 1) at vertex v.
    auto div_of = [&](int v, int c) {
      return c == 0 ? Point2{grad[v].x, -grad[v].y} : Point2{grad[v].y, grad[v].x};
    };
    for (int i = 0; i < 3; ++i) {
      if (mesh.is_boundary(tri[i])) continue;
      for (int j = 0; j < 3; ++j) {
        if (mesh.is_boundary(tri[j])) continue;
        for (int ci = 0; ci < 2; ++ci) {
          const Point2 di = div_of(i, ci);
          for (int cj = 0; cj < 2; ++cj) {
            const Point2 dj = div_of(j, cj);
            triplets.push_back({dof_index(mesh, tri[i], ci), dof_index(mesh, tri[j], cj),
                                area * (di.x * dj.x + di.y * dj.y)});
          }
        }
      }
    }
  }
  return SparseMatrix::from_triplets(static_cast<int>(2 * mesh.num_interior()), std::move(triplets));
}

std::vector<double> lumped_mass(const StructuredMesh& mesh) {
  std::vector<double> w(2 * mesh.num_interior());
  const auto interior = mesh.interior_nodes();
  for (std::size_t k = 0; k < interior.size(); ++k) {
    w[2 * k] = w[2 * k + 1] = 2.0 * mesh.gamma(interior[k]);
  }
  return w;
}

namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;

Mat2 full_matrix(const STTensor2& q) { return {{{q.q1, q.q2}, {q.q2, -q.q1}}}; }

// dW[k][i][j] = d_k W_ij on one triangle.
std::array<Mat2, 2> entry_gradients(const QTensorField& W, const Triangle& tri,
                                    const std::array<Point2, 3>& grad) {
  std::array<Mat2, 2> d{};
  for (int v = 0; v < 3; ++v) {
    const Mat2 m = full_matrix(W.at(tri[v]));
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        d[0][i][j] += m[i][j] * grad[v].x;
        d[1][i][j] += m[i][j] * grad[v].y;
      }
    }
  }
  return d;
}

}  // namespace

double alpha_pairing(const StructuredMesh& mesh, const QTensorField& W1, const QTensorField& W2) {
  constexpr int d = 2;
  double total = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const Triangle& tri = mesh.triangle(t);
    const auto grad = shape_gradients(mesh, t);
    const auto g1 = entry_gradients(W1, tri, grad);
    const auto g2 = entry_gradients(W2, tri, grad);

    double coupling = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          coupling += g1[k][j][k] * g2[i][i][j] + g1[k][i][k] * g2[j][i][j];
        }
      }
    }
    double trace_part = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) trace_part += g1[l][k][l] * g2[k][i][i];
      }
    }
    total += mesh.signed_area(t) * (-coupling + 2.0 / d * trace_part);
  }
  return total;
}

SpatialOperators SpatialOperators::build(StructuredMesh mesh) {
  SpatialOperators ops{std::move(mesh), {}, {}, {}};
  ops.stiffness = assemble_stiffness(ops.mesh);
  ops.div_form = assemble_div_form(ops.mesh);
  ops.mass = lumped_mass(ops.mesh);
  return ops;
}

}  // namespace qtensor
