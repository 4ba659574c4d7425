#include "macrotab/dubiner.hpp"

#include "macrotab/jacobi.hpp"

#include <cmath>
#include <stdexcept>

namespace macrotab {

namespace {

// Second-order jet of a bivariate polynomial; recurrences act on whole jets
// so no collapsed-coordinate division ever happens.
struct Jet {
  double v = 0, x = 0, y = 0, xx = 0, xy = 0, yy = 0;

  Jet operator*(const Jet& o) const
  {
    Jet r;
    r.v = v * o.v;
    r.x = x * o.v + v * o.x;
    r.y = y * o.v + v * o.y;
    r.xx = xx * o.v + 2 * x * o.x + v * o.xx;
    r.xy = xy * o.v + x * o.y + y * o.x + v * o.xy;
    r.yy = yy * o.v + 2 * y * o.y + v * o.yy;
    return r;
  }
  Jet operator*(double c) const { return {c * v, c * x, c * y, c * xx, c * xy, c * yy}; }
  Jet operator-(const Jet& o) const
  {
    return {v - o.v, x - o.x, y - o.y, xx - o.xx, xy - o.xy, yy - o.yy};
  }
};

inline int tri_idx(int p, int q) { return (p + q) * (p + q + 1) / 2 + q; }

void jrc(int a, int n, double& a1, double& a2, double& a3)
{
  a1 = (2 * n + 1 + a) * (2 * n + 2 + a) / (2.0 * (n + 1) * (n + 1 + a));
  a2 = a * a * (2 * n + 1 + a) / (2.0 * (n + 1) * (2 * n + a) * (n + 1 + a));
  a3 = (n + a) * static_cast<double>(n) * (2 * n + 2 + a) /
       ((n + 1.0) * (n + 1 + a) * (2 * n + a));
}

}  // namespace

int dubiner_size(int d, int degree)
{
  if (d == 1) return degree + 1;
  if (d == 2) return (degree + 1) * (degree + 2) / 2;
  if (d == 3) return (degree + 1) * (degree + 2) * (degree + 3) / 6;
  throw std::runtime_error("dubiner_size: unsupported dimension");
}

TabulatedValues dubiner_tabulate(int d, int degree, const Mat& pts, int max_deriv)
{
  if (max_deriv < 0 || max_deriv > 2)
    throw std::runtime_error("dubiner_tabulate: max_deriv must be at most 2");
  const int np = static_cast<int>(pts.rows());
  TabulatedValues tab;
  tab.dim = d;
  tab.max_deriv = max_deriv;
  tab.ncomp = 1;
  tab.derivs = deriv_list(d, max_deriv);
  const int nmem = dubiner_size(d, degree);
  tab.data.assign(tab.derivs.size(), Mat::Zero(nmem, np));

  if (d == 1) {
    // Orthonormal shifted Legendre on [0,1].
    const Vec shat = 2.0 * pts.col(0).array() - 1.0;
    for (int der = 0; der <= max_deriv; ++der) {
      const Mat vals = jacobi_batch(0, 0, degree, shat, der);
      const double chain = std::pow(2.0, der);
      for (int i = 0; i <= degree; ++i)
        tab.data[der].row(i) = std::sqrt(2.0 * i + 1.0) * chain * vals.row(i);
    }
    return tab;
  }
  if (d != 2) throw std::runtime_error("dubiner_tabulate: unsupported dimension");

  std::vector<Jet> mem(nmem);
  for (int q = 0; q < np; ++q) {
    const double x = pts(q, 0), y = pts(q, 1);
    const Jet f1{2 * x + y - 1, 2, 1, 0, 0, 0};
    const Jet f3{(1 - y) * (1 - y), 0, -2 * (1 - y), 0, 0, 2};
    mem[0] = Jet{1, 0, 0, 0, 0, 0};
    if (degree >= 1) mem[tri_idx(1, 0)] = f1;
    for (int p = 1; p < degree; ++p)
      mem[tri_idx(p + 1, 0)] = f1 * mem[tri_idx(p, 0)] * ((2.0 * p + 1) / (p + 1)) -
                               f3 * mem[tri_idx(p - 1, 0)] * (static_cast<double>(p) / (p + 1));
    for (int p = 0; p < degree; ++p) {
      const Jet ylin{(2 * p + 3) * y - 1, 0, 2.0 * p + 3, 0, 0, 0};
      mem[tri_idx(p, 1)] = ylin * mem[tri_idx(p, 0)];
    }
    for (int p = 0; p + 2 <= degree; ++p)
      for (int qq = 1; p + qq + 1 <= degree; ++qq) {
        double a1, a2, a3;
        jrc(2 * p + 1, qq, a1, a2, a3);
        const Jet ylin{2 * a1 * y + (a2 - a1), 0, 2 * a1, 0, 0, 0};
        mem[tri_idx(p, qq + 1)] = ylin * mem[tri_idx(p, qq)] - mem[tri_idx(p, qq - 1)] * a3;
      }

    for (int p = 0; p <= degree; ++p)
      for (int qq = 0; p + qq <= degree; ++qq) {
        const double scale = 2.0 * std::sqrt((p + 0.5) * (p + qq + 1));
        const Jet& m = mem[tri_idx(p, qq)];
        const int i = tri_idx(p, qq);
        tab.data[0](i, q) = scale * m.v;
        if (max_deriv >= 1) {
          tab.data[1](i, q) = scale * m.x;
          tab.data[2](i, q) = scale * m.y;
        }
        if (max_deriv >= 2) {
          tab.data[3](i, q) = scale * m.xx;
          tab.data[4](i, q) = scale * m.xy;
          tab.data[5](i, q) = scale * m.yy;
        }
      }
  }
  return tab;
}

}  // namespace macrotab
