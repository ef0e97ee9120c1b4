#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace qtensor {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Rectangle {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

using Triangle = std::array<int, 3>;

/// Uniform right-triangle lattice on an axis-aligned rectangle.
///
/// Nodes are numbered lexicographically, node (i, j) -> j * (nx + 1) + i.
/// Every lattice square is split along its lower-left to upper-right
/// diagonal; cell (i, j) owns triangles 2 * (j * nx + i) (below the diagonal)
/// and 2 * (j * nx + i) + 1 (above it), both counter-clockwise.
///
/// Instances are immutable once built.
class StructuredMesh {
 public:
  const Rectangle& domain() const { return domain_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_interior() const { return interior_nodes_.size(); }

  int node_index(int i, int j) const { return j * (nx_ + 1) + i; }

  std::span<const Point2> nodes() const { return nodes_; }
  const Point2& node(int n) const { return nodes_[n]; }
  std::span<const Triangle> triangles() const { return triangles_; }
  const Triangle& triangle(int t) const { return triangles_[t]; }

  bool is_boundary(int n) const { return is_boundary_[n] != 0; }

  /// Lumped mass weight gamma_z = integral of the hat function at node z.
  std::span<const double> gamma() const { return gamma_; }
  double gamma(int n) const { return gamma_[n]; }

  /// Position of a node in the interior unknown ordering, -1 on the boundary.
  int interior_index(int n) const { return interior_index_[n]; }
  std::span<const int> interior_nodes() const { return interior_nodes_; }

  /// Signed area; positive for every triangle of a valid mesh.
  double signed_area(int t) const;

  friend StructuredMesh build_mesh(const Rectangle& domain, int nx, int ny);

 private:
  StructuredMesh() = default;

  Rectangle domain_{};
  int nx_ = 0;
  int ny_ = 0;
  double h_ = 0.0;
  std::vector<Point2> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<char> is_boundary_;
  std::vector<double> gamma_;
  std::vector<int> interior_index_;
  std::vector<int> interior_nodes_;
};

/// Throws ValidationError unless nx, ny >= 2 and the cells are square.
StructuredMesh build_mesh(const Rectangle& domain, int nx, int ny);

inline StructuredMesh build_mesh(double x0, double x1, double y0, double y1, int nx, int ny) {
  return build_mesh(Rectangle{x0, x1, y0, y1}, nx, ny);
}

/// P1 interpolation data of one fine node in terms of a coarse triangle.
struct InjectionEntry {
  int coarse_triangle = -1;
  Triangle coarse_nodes{};
  std::array<double, 3> weights{};
};

struct NestedInjection {
  int ratio = 1;
  std::size_t coarse_nodes = 0;
  std::vector<InjectionEntry> entries;  // one per fine node
};

/// Barycentric data locating every fine node in the coarse lattice.
/// Throws ValidationError when the meshes are not nested.
NestedInjection nested_injection(const StructuredMesh& coarse, const StructuredMesh& fine);

}  // namespace qtensor
