#include "macrotab/types.hpp"

#include <stdexcept>

namespace macrotab {

std::vector<Deriv> deriv_list(int dim, int max_deriv)
{
  if (dim < 1 || dim > 3) throw std::runtime_error("deriv_list: unsupported dimension");
  std::vector<Deriv> out;
  for (int order = 0; order <= max_deriv; ++order) {
    if (dim == 1) {
      out.push_back({order, 0, 0});
    } else if (dim == 2) {
      for (int a0 = order; a0 >= 0; --a0) out.push_back({a0, order - a0, 0});
    } else {
      for (int a0 = order; a0 >= 0; --a0)
        for (int a1 = order - a0; a1 >= 0; --a1) out.push_back({a0, a1, order - a0 - a1});
    }
  }
  return out;
}

int deriv_index(int dim, const Deriv& a)
{
  const auto list = deriv_list(dim, deriv_order(a));
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i] == a) return static_cast<int>(i);
  throw std::runtime_error("deriv_index: invalid multi-index");
}

Mat simplex_lattice(const Mat& verts, int k)
{
  const int d = static_cast<int>(verts.cols());
  const int nv = static_cast<int>(verts.rows());
  if (nv != d + 1) throw std::runtime_error("simplex_lattice: need d+1 vertices");
  if (k == 0) {
    Mat pts(1, d);
    pts.row(0) = verts.colwise().mean();
    return pts;
  }
  std::vector<std::vector<int>> alphas;  // exponents of vertices 1..d
  if (d == 1) {
    for (int a1 = 0; a1 <= k; ++a1) alphas.push_back({a1});
  } else if (d == 2) {
    for (int a2 = 0; a2 <= k; ++a2)
      for (int a1 = 0; a1 + a2 <= k; ++a1) alphas.push_back({a1, a2});
  } else {
    for (int a3 = 0; a3 <= k; ++a3)
      for (int a2 = 0; a2 + a3 <= k; ++a2)
        for (int a1 = 0; a1 + a2 + a3 <= k; ++a1) alphas.push_back({a1, a2, a3});
  }
  Mat pts(static_cast<int>(alphas.size()), d);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    int a0 = k;
    for (int j = 0; j < d; ++j) a0 -= alphas[i][j];
    Vec p = (static_cast<double>(a0) / k) * verts.row(0).transpose();
    for (int j = 0; j < d; ++j)
      p += (static_cast<double>(alphas[i][j]) / k) * verts.row(j + 1).transpose();
    pts.row(static_cast<int>(i)) = p.transpose();
  }
  return pts;
}

}  // namespace macrotab
