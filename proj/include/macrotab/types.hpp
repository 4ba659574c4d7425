#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace macrotab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Derivative multi-index in up to three variables. order() <= 2 everywhere
/// in this library.
using Deriv = std::array<int, 3>;

inline int deriv_order(const Deriv& a) { return a[0] + a[1] + a[2]; }

/// Canonical list of multi-indices of order <= max_deriv in `dim` variables:
/// grouped by total order, lexicographic within a group with the first
/// variable's exponent decreasing. In 2D: (0,0); (1,0),(0,1); (2,0),(1,1),(0,2).
std::vector<Deriv> deriv_list(int dim, int max_deriv);

/// Position of `a` inside deriv_list(dim, order(a) or more).
int deriv_index(int dim, const Deriv& a);

inline int num_derivs(int dim, int max_deriv)
{
  return static_cast<int>(deriv_list(dim, max_deriv).size());
}

/// Dense tabulation of a set of (possibly vector-valued) functions.
/// data[d](i, q * ncomp + c) is the deriv_list(dim, max_deriv)[d] derivative
/// of component c of function i at point q.
struct TabulatedValues {
  int dim = 0;
  int max_deriv = 0;
  int ncomp = 1;
  std::vector<Deriv> derivs;
  std::vector<Mat> data;

  int num_functions() const { return data.empty() ? 0 : static_cast<int>(data[0].rows()); }
  int num_points() const
  {
    return data.empty() ? 0 : static_cast<int>(data[0].cols()) / ncomp;
  }
  const Mat& operator[](int d) const { return data[d]; }
};

/// Principal lattice of degree k on the simplex spanned by `verts`
/// ((d+1) x d row-wise vertices). Row-major points, one per multi-index with
/// |alpha| = k, ordered lexicographically by (alpha_1, ..., alpha_d) of the
/// non-leading barycentric exponents increasing. k = 0 gives the barycenter.
Mat simplex_lattice(const Mat& verts, int k);

}  // namespace macrotab
