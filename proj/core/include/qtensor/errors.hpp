#pragma once

#include <stdexcept>
#include <string>

namespace qtensor {

/// Invalid input: bad mesh extents, non-nested meshes, config invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The IEQ radicand F_B(Q) + A0 became non-positive.
class RadicandError : public std::domain_error {
 public:
  RadicandError(const std::string& what, double radicand)
      : std::domain_error(what), radicand_(radicand) {}

  double radicand() const noexcept { return radicand_; }

 private:
  double radicand_;
};

/// Linear solve failed to converge or produced non-finite values.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace qtensor
