#include "qtensor/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtensor/errors.hpp"

namespace qtensor {

double StructuredMesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Point2& a = nodes_[tri[0]];
  const Point2& b = nodes_[tri[1]];
  const Point2& c = nodes_[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

StructuredMesh build_mesh(const Rectangle& domain, int nx, int ny) {
  if (nx < 2 || ny < 2) {
    throw ValidationError("mesh needs at least 2 cells per axis, got nx=" + std::to_string(nx) +
                          " ny=" + std::to_string(ny));
  }
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw ValidationError("mesh domain must have positive width and height");
  }
  const double hx = domain.width() / nx;
  const double hy = domain.height() / ny;
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
    throw ValidationError("mesh cells must be square: hx=" + std::to_string(hx) +
                          " hy=" + std::to_string(hy));
  }

  StructuredMesh mesh;
  mesh.domain_ = domain;
  mesh.nx_ = nx;
  mesh.ny_ = ny;
  mesh.h_ = hx;

  const std::size_t n_nodes = static_cast<std::size_t>(nx + 1) * (ny + 1);
  mesh.nodes_.reserve(n_nodes);
  mesh.is_boundary_.reserve(n_nodes);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.nodes_.push_back({domain.x0 + domain.width() * i / nx, domain.y0 + domain.height() * j / ny});
      mesh.is_boundary_.push_back(i == 0 || i == nx || j == 0 || j == ny ? 1 : 0);
    }
  }

  mesh.triangles_.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int ll = mesh.node_index(i, j);
      const int lr = mesh.node_index(i + 1, j);
      const int ur = mesh.node_index(i + 1, j + 1);
      const int ul = mesh.node_index(i, j + 1);
      mesh.triangles_.push_back({ll, lr, ur});
      mesh.triangles_.push_back({ll, ur, ul});
    }
  }

  mesh.gamma_.assign(n_nodes, 0.0);
  for (std::size_t t = 0; t < mesh.triangles_.size(); ++t) {
    const double third = mesh.signed_area(static_cast<int>(t)) / 3.0;
    for (int v : mesh.triangles_[t]) mesh.gamma_[v] += third;
  }

  mesh.interior_index_.assign(n_nodes, -1);
  for (std::size_t n = 0; n < n_nodes; ++n) {
    if (!mesh.is_boundary_[n]) {
      mesh.interior_index_[n] = static_cast<int>(mesh.interior_nodes_.size());
      mesh.interior_nodes_.push_back(static_cast<int>(n));
    }
  }
  return mesh;
}

NestedInjection nested_injection(const StructuredMesh& coarse, const StructuredMesh& fine) {
  const Rectangle& cd = coarse.domain();
  const Rectangle& fd = fine.domain();
  const double tol = 1e-12 * std::max(cd.width(), cd.height());
  if (std::abs(cd.x0 - fd.x0) > tol || std::abs(cd.x1 - fd.x1) > tol ||
      std::abs(cd.y0 - fd.y0) > tol || std::abs(cd.y1 - fd.y1) > tol) {
    throw ValidationError("nested_injection: meshes cover different domains");
  }
  if (fine.nx() % coarse.nx() != 0 || fine.ny() % coarse.ny() != 0 ||
      fine.nx() / coarse.nx() != fine.ny() / coarse.ny()) {
    throw ValidationError("nested_injection: fine mesh (" + std::to_string(fine.nx()) +
                          ") is not an integer refinement of the coarse mesh (" +
                          std::to_string(coarse.nx()) + ")");
  }

  NestedInjection map;
  map.ratio = fine.nx() / coarse.nx();
  map.coarse_nodes = coarse.num_nodes();
  map.entries.resize(fine.num_nodes());
  const int m = map.ratio;

  for (int J = 0; J <= fine.ny(); ++J) {
    for (int I = 0; I <= fine.nx(); ++I) {
      const int i = std::min(I / m, coarse.nx() - 1);
      const int j = std::min(J / m, coarse.ny() - 1);
      // Local lattice offsets inside coarse cell (i, j), in units of the fine spacing.
      const int a = I - i * m;
      const int b = J - j * m;
      const double xi = static_cast<double>(a) / m;
      const double eta = static_cast<double>(b) / m;
      const int cell = j * coarse.nx() + i;

      InjectionEntry& e = map.entries[fine.node_index(I, J)];
      if (a >= b) {
        e.coarse_triangle = 2 * cell;
        e.weights = {1.0 - xi, xi - eta, eta};
      } else {
        e.coarse_triangle = 2 * cell + 1;
        e.weights = {1.0 - eta, xi, eta - xi};
      }
      e.coarse_nodes = coarse.triangle(e.coarse_triangle);
    }
  }
  return map;
}

}  // namespace qtensor
