#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nplab/field.hpp"

namespace nplab {
namespace {

constexpr double kPi = std::numbers::pi;

Field random_field(const Grid2D& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field f(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) f(i, j) = u(rng);
  return f;
}

Faces random_faces(const Grid2D& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Faces F(g);
  F.x() = F.x().unaryExpr([&](double) { return u(rng); });
  F.y() = F.y().unaryExpr([&](double) { return u(rng); });
  F.zero_boundary();
  return F;
}

TEST(Grid, RejectsDegenerateShapes) {
  EXPECT_THROW(Grid2D(1, 4), ValidationError);
  EXPECT_THROW(Grid2D(4, 4, 0.0, 1.0), ValidationError);
  const Grid2D g(4, 8, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(g.hx(), 0.5);
  EXPECT_DOUBLE_EQ(g.hy(), 0.125);
  EXPECT_DOUBLE_EQ(g.area(), 2.0);
}

TEST(Integrate, Constants) {
  EXPECT_DOUBLE_EQ(integrate(Field(Grid2D(8, 8), 1.0)), 1.0);
  EXPECT_DOUBLE_EQ(integrate(Field(Grid2D(8, 4, 2.0, 1.0), 3.0)), 6.0);
}

TEST(Integrate, MidpointExactForAffine) {
  const Grid2D g(64, 64);
  EXPECT_EQ(integrate(Field::sample(g, [](double x, double) { return x; })), 0.5);
}

TEST(Average, ConstantIsExact) {
  for (double c : {0.1, 1.0 / 3.0, 7.25, 1e-300}) {
    EXPECT_EQ(average(Field(Grid2D(37, 23, 1.3, 0.7), c)), c);
  }
}

TEST(Average, TwoByTwo) {
  Field f(Grid2D(2, 2));
  f(0, 0) = 1;
  f(1, 0) = 2;
  f(0, 1) = 3;
  f(1, 1) = 4;
  EXPECT_DOUBLE_EQ(average(f), 2.5);
}

TEST(Gradient, ConstantIsZero) {
  const Faces F = gradient(Field(Grid2D(9, 7), 4.0));
  EXPECT_EQ(F.x().abs().maxCoeff(), 0.0);
  EXPECT_EQ(F.y().abs().maxCoeff(), 0.0);
}

TEST(Gradient, AffineSamplesAreExact) {
  const Grid2D g(16, 12);
  const double a = 2.5;
  const Faces F = gradient(Field::sample(g, [a](double x, double) { return a * x; }));
  EXPECT_TRUE(F.boundary_is_zero());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) EXPECT_NEAR(F.x()(i, j), a, 1e-12);
  EXPECT_EQ(F.y().abs().maxCoeff(), 0.0);
}

TEST(Gradient, SecondOrderOnCosine) {
  double prev = 0.0;
  for (int n : {16, 32, 64, 128}) {
    const Grid2D g(n, n);
    const Faces F = gradient(Field::sample(g, [](double x, double) { return std::cos(kPi * x); }));
    double err = 0.0;
    for (int i = 1; i < n; ++i) {
      const double xf = i * g.hx();
      err = std::max(err, std::abs(F.x()(i, 0) + kPi * std::sin(kPi * xf)));
    }
    if (prev > 0.0) EXPECT_NEAR(std::log2(prev / err), 2.0, 0.1);
    prev = err;
  }
}

TEST(Divergence, ZeroFlux) {
  const Grid2D g(5, 6);
  EXPECT_EQ(divergence(Faces(g)).values().abs().maxCoeff(), 0.0);
}

TEST(Divergence, GaussTheoremOnRandomFlux) {
  std::mt19937_64 rng(3);
  const Grid2D g(64, 48, 1.5, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Faces F = random_faces(g, rng);
    const double norm = std::sqrt(inner(F, F));
    EXPECT_LE(std::abs(integrate(divergence(F))), 1e-13 * norm);
  }
}

TEST(Divergence, AdjointOfGradient) {
  std::mt19937_64 rng(11);
  const Grid2D g(64, 64);
  for (int k = 0; k < 20; ++k) {
    const Field f = random_field(g, rng);
    const Faces F = random_faces(g, rng);
    const double lhs = inner(gradient(f), F);
    const double rhs = -inner(f, divergence(F));
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(std::abs(lhs), 1.0));
  }
}

TEST(Laplacian, FivePointStencil) {
  const Grid2D g(5, 5, 1.0, 1.0);
  Field f(g);
  f(2, 2) = 1.0;
  const Field L = laplacian(f);
  const double h2 = g.hx() * g.hx();
  EXPECT_DOUBLE_EQ(L(2, 2), -4.0 / h2);
  EXPECT_DOUBLE_EQ(L(1, 2), 1.0 / h2);
  EXPECT_DOUBLE_EQ(L(2, 3), 1.0 / h2);
  // Corner cell: two missing neighbours are Neumann walls.
  Field c(g);
  c(0, 0) = 1.0;
  EXPECT_DOUBLE_EQ(laplacian(c)(0, 0), -2.0 / h2);
}

TEST(Laplacian, SelfAdjointAndNegative) {
  std::mt19937_64 rng(5);
  const Grid2D g(20, 30, 1.0, 2.0);
  const Field f = random_field(g, rng);
  const Field h = random_field(g, rng);
  EXPECT_NEAR(inner(laplacian(f), h), inner(f, laplacian(h)), 1e-10);
  EXPECT_LT(inner(laplacian(f), f), 0.0);
}

TEST(LpNorm, Constant) {
  const Grid2D g(8, 8, 2.0, 1.5);
  for (double p : {1.0, 2.0, 3.0, 4.5}) {
    EXPECT_NEAR(lp_norm(Field(g, 1.7), p), 1.7 * std::pow(3.0, 1.0 / p), 1e-13);
  }
}

TEST(LpNorm, TwoCells) {
  Field f(Grid2D(2, 2));
  f.values().row(0).setConstant(3.0);
  f.values().row(1).setConstant(4.0);
  EXPECT_NEAR(lp_norm(f, 2.0), std::sqrt(12.5), 1e-15);
}

TEST(LpPower, ZeroExponentIsArea) {
  EXPECT_EQ(lp_power(Field(Grid2D(4, 4, 2.0, 3.0), 0.0), 0.0), 6.0);
  EXPECT_THROW(lp_power(Field(Grid2D(4, 4)), -1.0), ValidationError);
}

TEST(H1Seminorm, AffineCountsInteriorFaces) {
  for (int n : {8, 32, 128}) {
    const Grid2D g(n, n);
    const double a = 3.0;
    const double s = h1_seminorm(Field::sample(g, [a](double x, double) { return a * x; }));
    // (n-1) interior x-faces per row of width hx.
    EXPECT_NEAR(s, a * std::sqrt((n - 1.0) / n), 1e-12);
  }
  EXPECT_EQ(h1_seminorm(Field(Grid2D(6, 6), 2.0)), 0.0);
}

TEST(Field, RejectsMixedGrids) {
  EXPECT_THROW(inner(Field(Grid2D(4, 4)), Field(Grid2D(4, 5))), ValidationError);
}

}  // namespace
}  // namespace nplab
