#pragma once

// Full 2x2 matrix evaluation of the bulk model, used to cross-check the
// reduced-coordinate production code.

#include <Eigen/Dense>
#include <cmath>

#include "qtensor/model.hpp"

namespace qtensor::oracle {

using Mat2 = Eigen::Matrix2d;

inline Mat2 to_dense(const STTensor2& q) {
  Mat2 m;
  m << q.q1, q.q2, q.q2, -q.q1;
  return m;
}

inline double frobenius(const Mat2& A, const Mat2& B) { return (A.array() * B.array()).sum(); }

inline double dense_bulk(const Mat2& Q, const Params& p) {
  const double tr2 = (Q * Q).trace();
  const double tr3 = (Q * Q * Q).trace();
  return 0.5 * p.a * tr2 - p.b / 3.0 * tr3 + 0.25 * p.c * tr2 * tr2;
}

// The b-term is kept in its general d-dimensional form with d = 2.
inline Mat2 dense_b_term(const Mat2& Q) { return Q * Q - 0.5 * (Q * Q).trace() * Mat2::Identity(); }

inline Mat2 dense_f(const Mat2& Q, const Params& p) {
  return p.a * Q - p.b * dense_b_term(Q) + p.c * (Q * Q).trace() * Q;
}

inline double dense_r(const Mat2& Q, const Params& p) { return std::sqrt(2.0 * (dense_bulk(Q, p) + p.A0)); }

inline Mat2 dense_P(const Mat2& Q, const Params& p) { return dense_f(Q, p) / dense_r(Q, p); }

}  // namespace qtensor::oracle
