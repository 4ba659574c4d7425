#include "macrotab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace macrotab {

namespace {

// Golub-Welsch for the Jacobi weight (1-x)^alpha (1+x)^beta on [-1,1],
// rescaled to [0,1] with the interval factor folded into the weights.
QuadratureRule gauss_jacobi_01(int n, double alpha, double beta)
{
  if (n < 1) throw std::runtime_error("gauss rule needs at least one point");
  Mat J = Mat::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double den = (2 * k + ab) * (2 * k + ab + 2);
    J(k, k) = den == 0.0 ? (beta - alpha) / (ab + 2) : (beta * beta - alpha * alpha) / den;
  }
  for (int k = 1; k < n; ++k) {
    double b2;
    if (k == 1)
      b2 = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) * (2 + ab) * (3 + ab));
    else
      b2 = 4 * k * (k + alpha) * (k + beta) * (k + ab) /
           ((2 * k + ab) * (2 * k + ab) * (2 * k + ab + 1) * (2 * k + ab - 1));
    J(k, k - 1) = J(k - 1, k) = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  const double mu0 = std::pow(2.0, ab + 1) * std::tgamma(alpha + 1) * std::tgamma(beta + 1) /
                     std::tgamma(ab + 2);
  QuadratureRule rule;
  rule.points.resize(n, 1);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points(i, 0) = 0.5 * (es.eigenvalues()[i] + 1.0);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0 / std::pow(2.0, ab + 1);
  }
  rule.degree = 2 * n - 1;
  return rule;
}

}  // namespace

QuadratureRule gauss_legendre(int n) { return gauss_jacobi_01(n, 0.0, 0.0); }

QuadratureRule gauss_jacobi(int n, int alpha)
{
  return gauss_jacobi_01(n, static_cast<double>(alpha), 0.0);
}

QuadratureRule simplex_rule(int d, int degree)
{
  if (degree < 0) throw std::runtime_error("simplex_rule: negative degree");
  const int n = degree / 2 + 1;
  if (d == 1) return gauss_legendre(n);
  if (d == 2) {
    const QuadratureRule gu = gauss_legendre(n);
    const QuadratureRule gv = gauss_jacobi(n, 1);
    QuadratureRule rule;
    rule.points.resize(n * n, 2);
    rule.weights.resize(n * n);
    int q = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i, ++q) {
        const double u = gu.points(i, 0), v = gv.points(j, 0);
        rule.points(q, 0) = u * (1.0 - v);
        rule.points(q, 1) = v;
        rule.weights[q] = gu.weights[i] * gv.weights[j];
      }
    rule.degree = degree;
    return rule;
  }
  if (d == 3) {
    const QuadratureRule gu = gauss_legendre(n);
    const QuadratureRule gv = gauss_jacobi(n, 1);
    const QuadratureRule gw = gauss_jacobi(n, 2);
    QuadratureRule rule;
    rule.points.resize(n * n * n, 3);
    rule.weights.resize(n * n * n);
    int q = 0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i, ++q) {
          const double u = gu.points(i, 0), v = gv.points(j, 0), w = gw.points(k, 0);
          rule.points(q, 0) = u * (1.0 - v) * (1.0 - w);
          rule.points(q, 1) = v * (1.0 - w);
          rule.points(q, 2) = w;
          rule.weights[q] = gu.weights[i] * gv.weights[j] * gw.weights[k];
        }
    rule.degree = degree;
    return rule;
  }
  throw std::runtime_error("simplex_rule: unsupported dimension");
}

QuadratureRule map_rule(const QuadratureRule& ref, const Mat& verts)
{
  const int d = static_cast<int>(verts.cols());
  Mat E(d, d);
  const Vec v0 = verts.row(0).transpose();
  for (int j = 0; j < d; ++j) E.col(j) = verts.row(j + 1).transpose() - v0;
  QuadratureRule rule;
  rule.degree = ref.degree;
  rule.points = (ref.points * E.transpose()).rowwise() + v0.transpose();
  rule.weights = ref.weights * std::abs(E.determinant());
  return rule;
}

QuadratureRule macro_rule(const SplitSimplicialComplex& c, int degree)
{
  const int d = c.dim();
  const QuadratureRule base = simplex_rule(d, degree);
  const int nsub = c.num_subcells();
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.resize(base.size() * nsub, d);
  rule.weights.resize(base.size() * nsub);
  for (int s = 0; s < nsub; ++s) {
    const QuadratureRule mapped = map_rule(base, c.child.entity_coords(d, s));
    rule.points.middleRows(s * base.size(), base.size()) = mapped.points;
    rule.weights.segment(s * base.size(), base.size()) = mapped.weights;
  }
  return rule;
}

QuadratureRule facet_rule(const SimplicialComplex& c, int edge_id, int degree)
{
  const FacetFrame f = facet_frame(c, edge_id);
  const QuadratureRule g = gauss_legendre(degree / 2 + 1);
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.resize(g.size(), 2);
  rule.weights = g.weights * f.length;
  for (int i = 0; i < g.size(); ++i)
    rule.points.row(i) = (f.a + g.points(i, 0) * (f.b - f.a)).transpose();
  return rule;
}

QuadratureRule common_rule(const SplitSimplicialComplex& a,
                           const SplitSimplicialComplex& b, int degree)
{
  if (is_refinement_of(a.child, b.child)) return macro_rule(a, degree);
  if (is_refinement_of(b.child, a.child)) return macro_rule(b, degree);
  throw std::runtime_error("common_rule: neither split refines the other");
}

}  // namespace macrotab
