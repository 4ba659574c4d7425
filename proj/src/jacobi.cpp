#include "macrotab/jacobi.hpp"

#include <stdexcept>

namespace macrotab {

namespace {

// Value and first two derivatives of P_0..P_n at x, by differentiating the
// three-term recurrence.
void jacobi_all(int alpha, int beta, int n, double x, Mat& v, Mat& d1, Mat& d2, int col)
{
  const double a = alpha, b = beta;
  v(0, col) = 1.0;
  d1(0, col) = 0.0;
  d2(0, col) = 0.0;
  if (n == 0) return;
  const double s1 = 0.5 * (a + b + 2), s0 = 0.5 * (a - b);
  v(1, col) = s1 * x + s0;
  d1(1, col) = s1;
  d2(1, col) = 0.0;
  for (int k = 2; k <= n; ++k) {
    const double c1 = 2.0 * k * (k + a + b) * (2 * k + a + b - 2);
    const double c2 = (2 * k + a + b - 1) * (a * a - b * b);
    const double c3 = (2 * k + a + b - 2) * (2 * k + a + b - 1) * (2 * k + a + b);
    const double c4 = 2.0 * (k + a - 1) * (k + b - 1) * (2 * k + a + b);
    const double p = (c2 + c3 * x) / c1, r = c3 / c1, q = c4 / c1;
    v(k, col) = p * v(k - 1, col) - q * v(k - 2, col);
    d1(k, col) = p * d1(k - 1, col) + r * v(k - 1, col) - q * d1(k - 2, col);
    d2(k, col) = p * d2(k - 1, col) + 2 * r * d1(k - 1, col) - q * d2(k - 2, col);
  }
}

}  // namespace

double jacobi(int alpha, int beta, int i, double x, int deriv)
{
  if (deriv < 0 || deriv > 2) throw std::runtime_error("jacobi: deriv must be 0, 1 or 2");
  Mat v(i + 1, 1), d1(i + 1, 1), d2(i + 1, 1);
  jacobi_all(alpha, beta, i, x, v, d1, d2, 0);
  return deriv == 0 ? v(i, 0) : deriv == 1 ? d1(i, 0) : d2(i, 0);
}

Mat jacobi_batch(int alpha, int beta, int n, const Vec& x, int deriv)
{
  if (deriv < 0 || deriv > 2) throw std::runtime_error("jacobi: deriv must be 0, 1 or 2");
  const int np = static_cast<int>(x.size());
  Mat v(n + 1, np), d1(n + 1, np), d2(n + 1, np);
  for (int q = 0; q < np; ++q) jacobi_all(alpha, beta, n, x[q], v, d1, d2, q);
  return deriv == 0 ? v : deriv == 1 ? d1 : d2;
}

}  // namespace macrotab
