#pragma once

#include <cmath>
#include <string>

#include "nplab/errors.hpp"

namespace nplab {

/// Uniform cell-centred grid on the rectangle [0, lx] x [0, ly].
///
/// Cell (i, j) has centre ((i + 1/2) hx, (j + 1/2) hy). The rectangle plays
/// the role of the bounded connected domain; |Omega| is `area()`.
class Grid2D {
 public:
  Grid2D(int nx, int ny, double lx = 1.0, double ly = 1.0)
      : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    if (nx < 2 || ny < 2) {
      throw ValidationError("Grid2D: need nx >= 2 and ny >= 2, got " +
                            std::to_string(nx) + " x " + std::to_string(ny));
    }
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
      throw ValidationError("Grid2D: side lengths must be positive and finite");
    }
    hx_ = lx_ / nx_;
    hy_ = ly_ / ny_;
  }

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int cells() const noexcept { return nx_ * ny_; }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double hx() const noexcept { return hx_; }
  double hy() const noexcept { return hy_; }
  double cell_area() const noexcept { return hx_ * hy_; }
  double area() const noexcept { return lx_ * ly_; }
  double diameter() const noexcept { return std::hypot(lx_, ly_); }
  double h_min() const noexcept { return hx_ < hy_ ? hx_ : hy_; }

  double x_center(int i) const noexcept { return (i + 0.5) * hx_; }
  double y_center(int j) const noexcept { return (j + 0.5) * hy_; }

  friend bool operator==(const Grid2D& a, const Grid2D& b) noexcept {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.lx_ == b.lx_ && a.ly_ == b.ly_;
  }

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
  double hx_;
  double hy_;
};

}  // namespace nplab
