#include "nplab/scharfetter_gummel.hpp"

namespace nplab {

namespace {

// B(|s|) (c_R - c_L) + s c_upwind: the same flux as B(-s) c_R - B(s) c_L, but
// built from the exact difference c_R - c_L so it keeps full relative accuracy
// when c_R and c_L nearly agree.
template <typename A, typename B, typename C>
Eigen::ArrayXXd sg_face(const A& s, const B& cl, const C& cr) {
  Eigen::ArrayXXd out(s.rows(), s.cols());
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      const double si = s(i, j);
      const double up = si >= 0.0 ? cr(i, j) : cl(i, j);
      out(i, j) = bernoulli(std::abs(si)) * (cr(i, j) - cl(i, j)) + si * up;
    }
  }
  return out;
}

}  // namespace

Faces sg_flux(const Field& c, const Field& phi, int z, double diff) {
  detail::require_same_grid(c.grid(), phi.grid(), "sg_flux");
  const Grid2D& g = c.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const auto& cv = c.values();
  const auto& pv = phi.values();
  Faces out(g);
  {
    const Eigen::ArrayXXd s = z * (pv.bottomRows(nx - 1) - pv.topRows(nx - 1));
    out.x().middleRows(1, nx - 1) = (diff / g.hx()) * sg_face(s, cv.topRows(nx - 1), cv.bottomRows(nx - 1));
  }
  {
    const Eigen::ArrayXXd s = z * (pv.rightCols(ny - 1) - pv.leftCols(ny - 1));
    out.y().middleCols(1, ny - 1) = (diff / g.hy()) * sg_face(s, cv.leftCols(ny - 1), cv.rightCols(ny - 1));
  }
  return out;
}

double max_bernoulli(const Field& phi, int z) {
  const Grid2D& g = phi.grid();
  const auto& pv = phi.values();
  const double sx = (pv.bottomRows(g.nx() - 1) - pv.topRows(g.nx() - 1)).abs().maxCoeff();
  const double sy = (pv.rightCols(g.ny() - 1) - pv.leftCols(g.ny() - 1)).abs().maxCoeff();
  const double s = std::abs(static_cast<double>(z)) * std::max(sx, sy);
  // B(-|s|) is increasing in |s|.
  return bernoulli(-s);
}

}  // namespace nplab
