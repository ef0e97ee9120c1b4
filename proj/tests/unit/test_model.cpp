#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dense_tensor.hpp"
#include "qtensor/errors.hpp"
#include "qtensor/model.hpp"

namespace qtensor {
namespace {

using oracle::dense_bulk;
using oracle::dense_f;
using oracle::dense_P;
using oracle::dense_r;
using oracle::to_dense;

std::vector<STTensor2> sample_tensors(int count, double spread, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<STTensor2> out;
  for (int k = 0; k < count; ++k) out.push_back({u(rng), u(rng)});
  return out;
}

TEST(Model, FrobeniusContraction) {
  EXPECT_DOUBLE_EQ(frob_dot({1.0, 0.0}, {1.0, 0.0}), 2.0);
  EXPECT_DOUBLE_EQ(frob_dot({1.0, 0.0}, {0.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(frob_dot({0.0, 0.0}, {3.0, -2.0}), 0.0);
  EXPECT_DOUBLE_EQ(trace_sq({0.6, 0.8}), 2.0);
}

TEST(Model, HandValuesAtUnitTensor) {
  const Params p;
  const STTensor2 q{1.0, 0.0};
  // tr Q^2 = 2, F_B = -0.2 + 1 = 0.8
  EXPECT_NEAR(bulk_potential(q, p), 0.8, 1e-15);
  const STTensor2 f = bulk_derivative(q, p);
  EXPECT_NEAR(f.q1, 1.8, 1e-15);
  EXPECT_NEAR(f.q2, 0.0, 1e-15);
  EXPECT_NEAR(aux_r({0.0, 0.0}, p), std::sqrt(1000.0), 1e-13);
  EXPECT_NEAR(aux_r(q, p), std::sqrt(1001.6), 1e-13);
  EXPECT_NEAR(aux_r(q, p), 31.6480647118, 1e-9);
  EXPECT_NEAR(aux_P(q, p).q1, 1.8 / std::sqrt(1001.6), 1e-15);
  EXPECT_NEAR(aux_P(q, p).q1, 0.0568755157, 1e-9);
}

TEST(Model, AgreesWithFullMatrixEvaluation) {
  Params p;
  p.a = -0.7;
  p.b = 2.3;
  p.c = 1.4;
  for (const auto& q : sample_tensors(200, 3.0, 11)) {
    const auto Q = to_dense(q);
    EXPECT_NEAR(bulk_potential(q, p), dense_bulk(Q, p), 1e-12 * (1.0 + std::abs(dense_bulk(Q, p))));
    const auto F = dense_f(Q, p);
    const auto f = bulk_derivative(q, p);
    EXPECT_NEAR(f.q1, F(0, 0), 1e-12 * (1.0 + F.norm()));
    EXPECT_NEAR(f.q2, F(0, 1), 1e-12 * (1.0 + F.norm()));
    EXPECT_NEAR(aux_r(q, p), dense_r(Q, p), 1e-12 * dense_r(Q, p));
    const auto P = dense_P(Q, p);
    EXPECT_NEAR(aux_P(q, p).q1, P(0, 0), 1e-13 * (1.0 + P.norm()));
    EXPECT_NEAR(aux_P(q, p).q2, P(0, 1), 1e-13 * (1.0 + P.norm()));
  }
}

TEST(Model, TwoDimensionalIdentities) {
  for (const auto& q : sample_tensors(200, 5.0, 12)) {
    const auto Q = to_dense(q);
    const double scale = std::pow(Q.norm(), 3) + 1.0;
    EXPECT_NEAR((Q * Q * Q).trace(), 0.0, 1e-14 * scale);
    EXPECT_NEAR(oracle::dense_b_term(Q).norm(), 0.0, 1e-14 * scale);
  }
}

TEST(Model, DerivativeMatchesRTimesP) {
  const Params p;
  for (const auto& q : sample_tensors(500, 4.0, 13)) {
    const STTensor2 f = bulk_derivative(q, p);
    const double r = aux_r(q, p);
    const STTensor2 P = aux_P(q, p);
    const double scale = std::hypot(f.q1, f.q2) + 1e-300;
    EXPECT_LE(std::hypot(f.q1 - r * P.q1, f.q2 - r * P.q2) / scale, 1e-14);
  }
}

// Remainder of the first-order Taylor model along direction d.
template <class Value, class Slope>
std::vector<double> taylor_remainders(Value value, Slope slope, const STTensor2& q, const STTensor2& d) {
  std::vector<double> out;
  for (double eps = 1e-2; eps > 1e-4; eps /= 2.0) {
    out.push_back(std::abs(value(q + eps * d) - value(q) - eps * frob_dot(slope(q), d)));
  }
  return out;
}

void expect_second_order(const std::vector<double>& rem) {
  for (std::size_t k = 0; k + 1 < rem.size(); ++k) {
    if (rem[k + 1] < 1e-13) continue;
    EXPECT_GE(std::log2(rem[k] / rem[k + 1]), 1.8) << "at halving " << k;
  }
}

TEST(Model, BulkDerivativeGradientCheck) {
  const Params p;
  for (const auto& q : sample_tensors(20, 1.5, 14)) {
    const STTensor2 d{0.37, -0.81};
    expect_second_order(taylor_remainders([&](const STTensor2& x) { return bulk_potential(x, p); },
                                          [&](const STTensor2& x) { return bulk_derivative(x, p); }, q, d));
  }
}

TEST(Model, AuxiliaryGradientCheck) {
  const Params p;
  for (const auto& q : sample_tensors(20, 1.5, 15)) {
    const STTensor2 d{-0.52, 0.66};
    expect_second_order(taylor_remainders([&](const STTensor2& x) { return aux_r(x, p); },
                                          [&](const STTensor2& x) { return aux_P(x, p); }, q, d));
  }
}

TEST(Model, AuxiliaryDirectionStaysBounded) {
  const Params p;
  // For large Q, r ~ sqrt(c/2) tr(Q^2) and |P|_F ~ sqrt(2c) |Q|_F.
  double worst = 0.0;
  for (const auto& q : sample_tensors(2000, 50.0, 16)) {
    const STTensor2 P = aux_P(q, p);
    worst = std::max(worst, std::sqrt(trace_sq(P)) / (1.0 + std::sqrt(trace_sq(q))));
  }
  EXPECT_LT(worst, std::sqrt(2.0 * p.c) + 0.05);
}

TEST(Model, RadicandMustStayPositive) {
  Params p;
  p.A0 = 1e-3;
  p.a = -4.0;
  // F_B at tr Q^2 = 2: -4 + 1 = -3, below -A0.
  EXPECT_THROW(aux_r({1.0, 0.0}, p), RadicandError);
  try {
    aux_r({1.0, 0.0}, p);
  } catch (const RadicandError& e) {
    EXPECT_LT(e.radicand(), 0.0);
  }
}

TEST(Model, ParameterValidation) {
  EXPECT_NO_THROW(Params{}.validate());
  auto bad = [](auto mutate) {
    Params p;
    mutate(p);
    return p;
  };
  EXPECT_THROW(bad([](Params& p) { p.c = 0.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](Params& p) { p.L1 = 0.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](Params& p) { p.L2 = -1.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](Params& p) { p.A0 = 0.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](Params& p) { p.sigma = -1e-3; }).validate(), ValidationError);
  EXPECT_THROW(bad([](Params& p) { p.M = 2.0; }).validate(), ValidationError);
  EXPECT_NO_THROW(bad([](Params& p) { p.L2 = -1.0; p.L3 = 1.5; }).validate());
}

}  // namespace
}  // namespace qtensor
