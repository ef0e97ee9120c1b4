#include "qtensor/model.hpp"

#include <cmath>
#include <string>

#include "qtensor/errors.hpp"

namespace qtensor {

void Params::validate() const {
  if (!(c > 0.0)) throw ValidationError("params.c must be positive");
  if (!(L1 > 0.0)) throw ValidationError("params.L1 must be positive");
  if (!(L2 + L3 >= 0.0)) throw ValidationError("params.L2 + params.L3 must be nonnegative");
  if (!(A0 > 0.0)) throw ValidationError("params.A0 must be positive");
  if (!(sigma >= 0.0)) throw ValidationError("params.sigma must be nonnegative");
  if (M != 1.0) throw ValidationError("params.M: only unit mobility is supported");
}

double bulk_potential(const STTensor2& Q, const Params& p) {
  const double tr2 = trace_sq(Q);
  constexpr double tr3 = 0.0;
  return 0.5 * p.a * tr2 - p.b / 3.0 * tr3 + 0.25 * p.c * tr2 * tr2;
}

STTensor2 bulk_derivative(const STTensor2& Q, const Params& p) {
  return (p.a + p.c * trace_sq(Q)) * Q;
}

double aux_r(const STTensor2& Q, const Params& p) {
  const double radicand = bulk_potential(Q, p) + p.A0;
  if (!(radicand > 0.0)) {
    throw RadicandError("aux_r: F_B(Q) + A0 = " + std::to_string(radicand) +
                            " is not positive; increase A0",
                        radicand);
  }
  return std::sqrt(2.0 * radicand);
}

STTensor2 aux_P(const STTensor2& Q, const Params& p) {
  return (1.0 / aux_r(Q, p)) * bulk_derivative(Q, p);
}

}  // namespace qtensor
