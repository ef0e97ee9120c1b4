#include "qtensor/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qtensor/errors.hpp"

namespace qtensor {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double row_product(const SparseMatrix& m, int r, std::span<const double> x) {
  const auto ptr = m.row_ptr();
  const auto col = m.col_idx();
  const auto val = m.values();
  double s = 0.0;
  for (int k = ptr[r]; k < ptr[r + 1]; ++k) s += val[k] * x[col[k]];
  return s;
}

}  // namespace

StepOperator::StepOperator(std::span<const double> mass, const SparseMatrix& stiffness,
                           const SparseMatrix& div_form)
    : mass_(mass), stiffness_(&stiffness), div_form_(&div_form) {
  if (static_cast<std::size_t>(stiffness.dim()) != mass.size() ||
      static_cast<std::size_t>(div_form.dim()) != mass.size()) {
    throw std::invalid_argument("StepOperator: operator dimensions disagree");
  }
}

void StepOperator::set_rank_one(std::vector<double> directions) {
  if (!directions.empty() && directions.size() != mass_.size()) {
    throw std::invalid_argument("StepOperator::set_rank_one: wrong length");
  }
  directions_ = std::move(directions);
}

void StepOperator::apply(std::span<const double> x, std::span<double> y) const {
  const int n = static_cast<int>(mass_.size());
  const bool with_k = coeff_.gradient != 0.0;
  const bool with_d = coeff_.div != 0.0;
  for (int r = 0; r < n; ++r) {
    double v = coeff_.mass * mass_[r] * x[r];
    if (with_k) v += coeff_.gradient * row_product(*stiffness_, r, x);
    if (with_d) v += coeff_.div * row_product(*div_form_, r, x);
    y[r] = v;
  }
  if (coeff_.rank_one != 0.0 && !directions_.empty()) {
    // mass_[2k] = 2 gamma_z for both components of node k.
    for (int k = 0; k < n / 2; ++k) {
      const double p1 = directions_[2 * k];
      const double p2 = directions_[2 * k + 1];
      const double s = coeff_.rank_one * mass_[2 * k] * (p1 * x[2 * k] + p2 * x[2 * k + 1]);
      y[2 * k] += s * p1;
      y[2 * k + 1] += s * p2;
    }
  }
}

std::vector<double> StepOperator::diagonal() const {
  std::vector<double> d(mass_.size());
  const auto kd = stiffness_->diagonal();
  const auto dd = div_form_->diagonal();
  for (std::size_t r = 0; r < d.size(); ++r) {
    d[r] = coeff_.mass * mass_[r] + coeff_.gradient * kd[r] + coeff_.div * dd[r];
    if (coeff_.rank_one != 0.0 && !directions_.empty()) {
      d[r] += coeff_.rank_one * mass_[r] * directions_[r] * directions_[r];
    }
  }
  return d;
}

CgResult cg_solve(const StepOperator& A, std::span<const double> rhs, std::span<double> x,
                  const CgOptions& options) {
  const std::size_t n = A.size();
  if (rhs.size() != n || x.size() != n) throw std::invalid_argument("cg_solve: size mismatch");
  if (!(options.tol > 0.0)) throw std::invalid_argument("cg_solve: tol must be positive");

  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  if (rhs_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0};
  }
  const int max_iter = options.max_iter > 0 ? options.max_iter : static_cast<int>(10 * n);
  const double target = options.tol * rhs_norm;

  std::vector<double> inv_diag = A.diagonal();
  for (double& v : inv_diag) {
    if (!(v > 0.0)) throw SolverError("cg_solve: non-positive diagonal entry", 0, 0.0);
    v = 1.0 / v;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  auto true_residual = [&] {
    A.apply(x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
    return std::sqrt(dot(r, r));
  };

  double res = true_residual();
  int it = 0;
  while (res > target && it < max_iter) {
    // Restarts from the explicit residual whenever the recursive one has
    // converged but the true residual has not.
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    while (it < max_iter) {
      A.apply(p, q);
      const double pq = dot(p, q);
      if (!(pq > 0.0)) {
        throw SolverError("cg_solve: operator is not positive definite", it, res / rhs_norm);
      }
      const double alpha = rz / pq;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      ++it;
      if (std::sqrt(dot(r, r)) <= target) break;
      for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
      const double rz_next = dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    res = true_residual();
  }

  if (!std::isfinite(res) || res > target) {
    throw SolverError("cg_solve: no convergence after " + std::to_string(it) +
                          " iterations, relative residual " + std::to_string(res / rhs_norm),
                      it, res / rhs_norm);
  }
  return {it, res / rhs_norm};
}

std::vector<double> cg_solve(const StepOperator& A, std::span<const double> rhs,
                             const CgOptions& options, CgResult* info) {
  std::vector<double> x(A.size(), 0.0);
  const CgResult result = cg_solve(A, rhs, x, options);
  if (info) *info = result;
  return x;
}

}  // namespace qtensor
