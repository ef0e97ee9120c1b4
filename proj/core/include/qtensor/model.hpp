#pragma once

namespace qtensor {

/// Material and scheme constants of the inertial Landau-de Gennes flow.
struct Params {
  double L1 = 0.001;
  double L2 = 0.0;
  double L3 = 0.0;
  double a = -0.2;
  double b = 1.0;
  double c = 1.0;
  double A0 = 500.0;  // IEQ shift; F_B + A0 must stay positive
  double sigma = 0.0;  // inertial constant, 0 gives the parabolic flow
  double M = 1.0;  // mobility; the scheme is written for M = 1 only

  double elastic_div() const { return L2 + L3; }

  /// Throws ValidationError on c <= 0, L1 <= 0, L2 + L3 < 0, A0 <= 0,
  /// sigma < 0 or M != 1.
  void validate() const;
};

/// Symmetric trace-free 2x2 tensor [[q1, q2], [q2, -q1]] in reduced coordinates.
struct STTensor2 {
  double q1 = 0.0;
  double q2 = 0.0;

  STTensor2& operator+=(const STTensor2& o) {
    q1 += o.q1;
    q2 += o.q2;
    return *this;
  }
  STTensor2& operator-=(const STTensor2& o) {
    q1 -= o.q1;
    q2 -= o.q2;
    return *this;
  }
  STTensor2& operator*=(double s) {
    q1 *= s;
    q2 *= s;
    return *this;
  }

  friend STTensor2 operator+(STTensor2 a, const STTensor2& b) { return a += b; }
  friend STTensor2 operator-(STTensor2 a, const STTensor2& b) { return a -= b; }
  friend STTensor2 operator*(double s, STTensor2 a) { return a *= s; }
  friend STTensor2 operator*(STTensor2 a, double s) { return a *= s; }
  friend bool operator==(const STTensor2&, const STTensor2&) = default;
};

/// Frobenius contraction A:B = 2 (a1 b1 + a2 b2).
inline double frob_dot(const STTensor2& A, const STTensor2& B) {
  return 2.0 * (A.q1 * B.q1 + A.q2 * B.q2);
}

/// tr(Q^2) = |Q|_F^2.
inline double trace_sq(const STTensor2& Q) { return frob_dot(Q, Q); }

/// F_B(Q) = (a/2) tr(Q^2) - (b/3) tr(Q^3) + (c/4) tr(Q^2)^2.
/// tr(Q^3) vanishes identically for symmetric trace-free 2x2 tensors.
double bulk_potential(const STTensor2& Q, const Params& p);

/// f(Q) = dF_B/dQ = a Q - b (Q^2 - tr(Q^2) I / 2) + c tr(Q^2) Q.
/// In two dimensions Q^2 = (q1^2 + q2^2) I, so the b-term drops out.
STTensor2 bulk_derivative(const STTensor2& Q, const Params& p);

/// r(Q) = sqrt(2 (F_B(Q) + A0)). Throws RadicandError if F_B(Q) + A0 <= 0.
double aux_r(const STTensor2& Q, const Params& p);

/// P(Q) = f(Q) / r(Q), the derivative of r with respect to Q.
STTensor2 aux_P(const STTensor2& Q, const Params& p);

}  // namespace qtensor
