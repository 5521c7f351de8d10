#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "nplab/errors.hpp"
#include "nplab/grid.hpp"

namespace nplab {

/// One value per cell, stored as an nx-by-ny Eigen array (x index fastest).
template <typename Scalar>
class ScalarField {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit ScalarField(const Grid2D& grid, Scalar value = Scalar(0))
      : grid_(grid), values_(Array::Constant(grid.nx(), grid.ny(), value)) {}

  ScalarField(const Grid2D& grid, Array values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.rows() != grid_.nx() || values_.cols() != grid_.ny()) {
      throw ValidationError("ScalarField: value array shape does not match grid");
    }
  }

  /// Samples fn(x, y) at cell centres.
  template <typename Fn>
  static ScalarField sample(const Grid2D& grid, Fn&& fn) {
    Array v(grid.nx(), grid.ny());
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        v(i, j) = static_cast<Scalar>(fn(grid.x_center(i), grid.y_center(j)));
      }
    }
    return ScalarField(grid, std::move(v));
  }

  const Grid2D& grid() const noexcept { return grid_; }
  const Array& values() const noexcept { return values_; }
  Array& values() noexcept { return values_; }

  Scalar operator()(int i, int j) const { return values_(i, j); }
  Scalar& operator()(int i, int j) { return values_(i, j); }

  Scalar min() const { return values_.minCoeff(); }
  Scalar max() const { return values_.maxCoeff(); }
  bool is_constant() const { return values_.minCoeff() == values_.maxCoeff(); }

  friend bool operator==(const ScalarField& a, const ScalarField& b) {
    return a.grid_ == b.grid_ && (a.values_ == b.values_).all();
  }

 private:
  Grid2D grid_;
  Array values_;
};

/// Face-normal values: x-faces are (nx+1) x ny, y-faces nx x (ny+1).
/// Boundary faces hold 0, which encodes the zero-flux / homogeneous
/// Neumann condition for every quantity that lives on faces.
template <typename Scalar>
class FaceField {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit FaceField(const Grid2D& grid)
      : grid_(grid),
        x_(Array::Zero(grid.nx() + 1, grid.ny())),
        y_(Array::Zero(grid.nx(), grid.ny() + 1)) {}

  const Grid2D& grid() const noexcept { return grid_; }
  const Array& x() const noexcept { return x_; }
  const Array& y() const noexcept { return y_; }
  Array& x() noexcept { return x_; }
  Array& y() noexcept { return y_; }

  /// Re-imposes the boundary invariant after the arrays were written freely.
  void zero_boundary() {
    x_.row(0).setZero();
    x_.row(grid_.nx()).setZero();
    y_.col(0).setZero();
    y_.col(grid_.ny()).setZero();
  }

  bool boundary_is_zero() const {
    return (x_.row(0) == Scalar(0)).all() && (x_.row(grid_.nx()) == Scalar(0)).all() &&
           (y_.col(0) == Scalar(0)).all() && (y_.col(grid_.ny()) == Scalar(0)).all();
  }

 private:
  Grid2D grid_;
  Array x_;
  Array y_;
};

using Field = ScalarField<double>;
using Faces = FaceField<double>;

namespace detail {

inline void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where) {
  if (!(a == b)) throw ValidationError(std::string(where) + ": fields live on different grids");
}

}  // namespace detail

/// Midpoint quadrature; exact for cellwise-constant data.
template <typename Scalar>
Scalar integrate(const ScalarField<Scalar>& f) {
  return f.values().sum() * static_cast<Scalar>(f.grid().cell_area());
}

/// Mean over the domain. A constant field returns its value bit-exactly so
/// that centring it gives an exact zero.
template <typename Scalar>
Scalar average(const ScalarField<Scalar>& f) {
  if (f.is_constant()) return f.values()(0, 0);
  return f.values().sum() / static_cast<Scalar>(f.values().size());
}

template <typename Scalar>
ScalarField<Scalar> centered(const ScalarField<Scalar>& f) {
  return ScalarField<Scalar>(f.grid(), f.values() - average(f));
}

/// Cell inner product with weight hx*hy.
template <typename Scalar>
Scalar inner(const ScalarField<Scalar>& f, const ScalarField<Scalar>& g) {
  detail::require_same_grid(f.grid(), g.grid(), "inner");
  return (f.values() * g.values()).sum() * static_cast<Scalar>(f.grid().cell_area());
}

/// Face inner product; every face carries weight hx*hy, which makes
/// gradient and -divergence exact adjoints.
template <typename Scalar>
Scalar inner(const FaceField<Scalar>& f, const FaceField<Scalar>& g) {
  detail::require_same_grid(f.grid(), g.grid(), "inner");
  return ((f.x() * g.x()).sum() + (f.y() * g.y()).sum()) *
         static_cast<Scalar>(f.grid().cell_area());
}

template <typename Scalar>
FaceField<Scalar> gradient(const ScalarField<Scalar>& f) {
  const Grid2D& g = f.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  FaceField<Scalar> out(g);
  const auto& v = f.values();
  const Scalar inv_hx = Scalar(1) / static_cast<Scalar>(g.hx());
  const Scalar inv_hy = Scalar(1) / static_cast<Scalar>(g.hy());
  out.x().middleRows(1, nx - 1) = (v.bottomRows(nx - 1) - v.topRows(nx - 1)) * inv_hx;
  out.y().middleCols(1, ny - 1) = (v.rightCols(ny - 1) - v.leftCols(ny - 1)) * inv_hy;
  return out;
}

template <typename Scalar>
ScalarField<Scalar> divergence(const FaceField<Scalar>& flux) {
  const Grid2D& g = flux.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const Scalar inv_hx = Scalar(1) / static_cast<Scalar>(g.hx());
  const Scalar inv_hy = Scalar(1) / static_cast<Scalar>(g.hy());
  typename ScalarField<Scalar>::Array v =
      (flux.x().bottomRows(nx) - flux.x().topRows(nx)) * inv_hx +
      (flux.y().rightCols(ny) - flux.y().leftCols(ny)) * inv_hy;
  return ScalarField<Scalar>(g, std::move(v));
}

/// Five-point Neumann Laplacian, divergence(gradient(f)).
template <typename Scalar>
ScalarField<Scalar> laplacian(const ScalarField<Scalar>& f) {
  return divergence(gradient(f));
}

/// Integral of |f|^p. By convention p = 0 gives |Omega|.
template <typename Scalar>
Scalar lp_power(const ScalarField<Scalar>& f, double p) {
  if (p < 0.0 || std::isnan(p)) throw ValidationError("lp_power: exponent must be >= 0");
  if (p == 0.0) return static_cast<Scalar>(f.grid().area());
  if (p == 1.0) return f.values().abs().sum() * static_cast<Scalar>(f.grid().cell_area());
  if (p == 2.0) return f.values().square().sum() * static_cast<Scalar>(f.grid().cell_area());
  return f.values().abs().pow(static_cast<Scalar>(p)).sum() *
         static_cast<Scalar>(f.grid().cell_area());
}

/// (integral |f|^p)^(1/p); p = 0 returns |Omega| (the ||q||_0^0 convention).
template <typename Scalar>
Scalar lp_norm(const ScalarField<Scalar>& f, double p) {
  const Scalar power = lp_power(f, p);
  if (p == 0.0) return power;
  if (p == 1.0) return power;
  if (p == 2.0) return std::sqrt(power);
  return std::pow(power, static_cast<Scalar>(1.0 / p));
}

template <typename Scalar>
Scalar h1_seminorm(const ScalarField<Scalar>& f) {
  const FaceField<Scalar> g = gradient(f);
  return std::sqrt(inner(g, g));
}

}  // namespace nplab
