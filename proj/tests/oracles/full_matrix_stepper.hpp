#pragma once

// Reference implementation of the mass-lumped IEQ scheme on full 2x2
// matrices. Every matrix entry is an unknown, r^{n+1} is solved together
// with Q^{n+1} in one dense system, and the elastic pairings are assembled
// element by element from the three-term alpha definition with the E_ij
// basis. Nothing here is shared with the reduced production path except
// node coordinates and triangle connectivity.

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "dense_tensor.hpp"
#include "qtensor/mesh.hpp"
#include "qtensor/model.hpp"

namespace qtensor::oracle {

class FullMatrixStepper {
 public:
  struct State {
    std::vector<Mat2> q_prev;
    std::vector<Mat2> q_curr;
    std::vector<double> r;
  };

  FullMatrixStepper(const StructuredMesh& mesh, const Params& p, double dt) : mesh_(mesh), p_(p), dt_(dt) {
    const int n = static_cast<int>(mesh.num_nodes());
    node_to_unknown_.assign(n, -1);
    for (int z = 0; z < n; ++z) {
      if (!mesh.is_boundary(z)) node_to_unknown_[z] = num_interior_++;
    }
    gamma_.assign(n, 0.0);
    const int ndof = 4 * num_interior_;
    grad_.setZero(num_interior_, num_interior_);
    alpha_.setZero(ndof, ndof);

    for (const Triangle& tri : mesh.triangles()) {
      std::array<Eigen::Vector2d, 3> x;
      for (int v = 0; v < 3; ++v) x[v] = {mesh.node(tri[v]).x, mesh.node(tri[v]).y};
      Eigen::Matrix3d coords;
      for (int v = 0; v < 3; ++v) coords.col(v) << 1.0, x[v](0), x[v](1);
      const double area = 0.5 * std::abs(coords.determinant());
      // Rows of inverse(coords) give the barycentric coefficients.
      const Eigen::Matrix3d inv = coords.inverse();
      std::array<Eigen::Vector2d, 3> g;
      for (int v = 0; v < 3; ++v) g[v] = {inv(v, 1), inv(v, 2)};

      for (int v = 0; v < 3; ++v) gamma_[tri[v]] += area / 3.0;

      for (int zv = 0; zv < 3; ++zv) {
        const int zi = node_to_unknown_[tri[zv]];
        if (zi < 0) continue;
        for (int wv = 0; wv < 3; ++wv) {
          const int wi = node_to_unknown_[tri[wv]];
          if (wi < 0) continue;
          grad_(zi, wi) += area * g[zv].dot(g[wv]);
          // <alpha(phi_w E_ab), phi_z E_ij>
          for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
              for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                  double v = 0.0;
                  if (j == a) v -= g[wv](b) * g[zv](i);
                  if (i == a) v -= g[wv](b) * g[zv](j);
                  if (i == j) v += g[wv](b) * g[zv](a);  // (2/d) = 1
                  alpha_(dof(zi, i, j), dof(wi, a, b)) += area * v;
                }
              }
            }
          }
        }
      }
    }
  }

  int num_unknowns() const { return 5 * num_interior_; }
  double gamma(int node) const { return gamma_[node]; }

  /// Q^0 = q0, Q^1 = q0 + dt qt0 with boundary entries forced to zero.
  State initialize(const std::vector<Mat2>& q0, const std::vector<Mat2>& qt0) const {
    const std::size_t n = mesh_.num_nodes();
    State s;
    s.q_prev.assign(n, Mat2::Zero());
    s.q_curr.assign(n, Mat2::Zero());
    s.r.assign(n, 0.0);
    for (std::size_t z = 0; z < n; ++z) {
      if (node_to_unknown_[z] >= 0) s.q_prev[z] = q0[z];
      s.r[z] = dense_r(s.q_prev[z], p_);
    }
    if (p_.sigma == 0.0) {
      s.q_curr = s.q_prev;
      return s;
    }
    for (std::size_t z = 0; z < n; ++z) {
      if (node_to_unknown_[z] < 0) continue;
      s.q_curr[z] = s.q_prev[z] + dt_ * qt0[z];
      s.r[z] += frobenius(dense_P(s.q_prev[z], p_), s.q_curr[z] - s.q_prev[z]);
    }
    return s;
  }

  State step(const State& s) const {
    const int nq = 4 * num_interior_;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(num_unknowns(), num_unknowns());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(num_unknowns());
    const double inv_dt = 1.0 / dt_;
    const double inertia = p_.sigma * inv_dt * inv_dt;
    const double ediv = 0.5 * (p_.L2 + p_.L3);

    Eigen::VectorXd qn(nq), qprev(nq);
    for (std::size_t z = 0; z < mesh_.num_nodes(); ++z) {
      const int k = node_to_unknown_[z];
      if (k < 0) continue;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          qn(dof(k, i, j)) = s.q_curr[z](i, j);
          qprev(dof(k, i, j)) = s.q_prev[z](i, j);
        }
      }
    }

    for (std::size_t z = 0; z < mesh_.num_nodes(); ++z) {
      const int k = node_to_unknown_[z];
      if (k < 0) continue;
      const double g = gamma_[z];
      const Mat2 P = dense_P(s.q_curr[z], p_);
      const int rk = nq + k;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const int row = dof(k, i, j);
          // time derivative and inertia
          A(row, row) += g * (inv_dt + inertia);
          rhs(row) += g * (inv_dt + 2.0 * inertia) * qn(row) - g * inertia * (p_.sigma > 0.0 ? qprev(row) : 0.0);
          // L1 <grad Q^{n+1/2}, grad Phi>
          for (int w = 0; w < num_interior_; ++w) {
            A(row, dof(w, i, j)) += 0.5 * p_.L1 * grad_(k, w);
            rhs(row) -= 0.5 * p_.L1 * grad_(k, w) * qn(dof(w, i, j));
          }
          // -((L2+L3)/2) <alpha(Q^{n+1/2}), Phi>
          for (int col = 0; col < nq; ++col) {
            A(row, col) -= 0.5 * ediv * alpha_(row, col);
            rhs(row) += 0.5 * ediv * alpha_(row, col) * qn(col);
          }
          // <r^{n+1/2} P(Q^n), Phi>_h
          A(row, rk) += 0.5 * g * P(i, j);
          rhs(row) -= 0.5 * g * s.r[z] * P(i, j);
        }
      }
      // <r^{n+1} - r^n, psi>_h = <P(Q^n) : (Q^{n+1} - Q^n), psi>_h
      A(rk, rk) += g;
      rhs(rk) += g * s.r[z];
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          A(rk, dof(k, i, j)) -= g * P(i, j);
          rhs(rk) -= g * P(i, j) * qn(dof(k, i, j));
        }
      }
    }

    const Eigen::VectorXd x = A.fullPivLu().solve(rhs);
    State next;
    next.q_prev = s.q_curr;
    next.q_curr.assign(mesh_.num_nodes(), Mat2::Zero());
    next.r = s.r;
    for (std::size_t z = 0; z < mesh_.num_nodes(); ++z) {
      const int k = node_to_unknown_[z];
      if (k < 0) continue;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) next.q_curr[z](i, j) = x(dof(k, i, j));
      }
      next.r[z] = x(nq + k);
    }
    return next;
  }

 private:
  static int dof(int node, int i, int j) { return 4 * node + 2 * i + j; }

  const StructuredMesh& mesh_;
  Params p_;
  double dt_;
  int num_interior_ = 0;
  std::vector<int> node_to_unknown_;
  std::vector<double> gamma_;
  Eigen::MatrixXd grad_;
  Eigen::MatrixXd alpha_;
};

}  // namespace qtensor::oracle
