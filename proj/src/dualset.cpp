#include "macrotab/dualset.hpp"

#include <Eigen/Dense>

#include <limits>
#include <sstream>
#include <stdexcept>

namespace macrotab {

int Functional::max_order() const
{
  int order = 0;
  for (const auto& t : terms) order = std::max(order, deriv_order(t.deriv));
  return order;
}

double evaluate(const Functional& L, const PointFunction& f)
{
  double acc = 0;
  for (const auto& t : L.terms) acc += t.weight * f(t.point, t.deriv, t.comp);
  return acc;
}

Vec evaluate_all(const std::vector<Functional>& Ls, const PointFunction& f)
{
  Vec out(Ls.size());
  for (size_t i = 0; i < Ls.size(); ++i) out(i) = evaluate(Ls[i], f);
  return out;
}

Functional point_eval(const Vec& p, int comp, int owner)
{
  return {{FunctionalTerm{p, {0, 0, 0}, comp, 1.0, owner}}};
}

Functional point_deriv(const Vec& p, const Deriv& d, int comp, int owner)
{
  return {{FunctionalTerm{p, d, comp, 1.0, owner}}};
}

Functional directional_deriv(const Vec& p, const Vec& dir, int comp, int owner)
{
  Functional L;
  L.terms.push_back({p, {1, 0, 0}, comp, dir(0), owner});
  L.terms.push_back({p, {0, 1, 0}, comp, dir(1), owner});
  return L;
}

Functional moment(const Mat& pts, const Vec& w,
                  const std::vector<std::pair<Deriv, int>>& slots, const Mat& g,
                  double scale, int owner)
{
  Functional L;
  for (int q = 0; q < pts.rows(); ++q)
    for (size_t s = 0; s < slots.size(); ++s) {
      const double weight = scale * w(q) * g(q, static_cast<int>(s));
      if (weight == 0.0) continue;
      L.terms.push_back({pts.row(q).transpose(), slots[s].first,
                         slots[s].second, weight, owner});
    }
  return L;
}

void append_scaled(Functional& dst, const Functional& src, double s)
{
  for (const auto& t : src.terms) {
    FunctionalTerm copy = t;
    copy.weight *= s;
    dst.terms.push_back(copy);
  }
}

Mat vandermonde(const std::vector<Functional>& Ls, const ExpansionSet& set)
{
  const int d = set.complex->dim();
  int nterm = 0, max_deriv = 0;
  for (const auto& L : Ls) {
    nterm += static_cast<int>(L.terms.size());
    max_deriv = std::max(max_deriv, L.max_order());
  }
  if (max_deriv > 2)
    throw std::runtime_error("vandermonde: derivative order above 2 unsupported");

  Mat pts(nterm, d);
  int k = 0;
  for (const auto& L : Ls)
    for (const auto& t : L.terms) pts.row(k++) = t.point.transpose();

  std::vector<int> own = set.owners(pts);
  k = 0;
  for (const auto& L : Ls)
    for (const auto& t : L.terms) {
      if (t.owner >= 0) own[k] = t.owner;
      ++k;
    }

  const TabulatedValues tab = set.tabulate(pts, max_deriv, &own);
  Mat V = Mat::Zero(Ls.size(), set.nloc());
  k = 0;
  for (size_t i = 0; i < Ls.size(); ++i)
    for (const auto& t : Ls[i].terms) {
      const Mat& data = tab.data[deriv_index(d, t.deriv)];
      V.row(i) += t.weight * data.col(k * set.ncomp + t.comp).transpose();
      ++k;
    }
  return V;
}

Mat invert_vandermonde(const Mat& V, double cond_limit, double* cond_out)
{
  if (V.rows() != V.cols())
    throw std::runtime_error("invert_vandermonde: matrix must be square");
  Eigen::JacobiSVD<Mat> svd(V, Eigen::ComputeFullU);
  const Vec sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double cond = smin > 0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (cond_out) *cond_out = cond;
  if (!(cond < cond_limit)) {
    int worst = 0;
    svd.matrixU().col(sv.size() - 1).cwiseAbs().maxCoeff(&worst);
    std::ostringstream msg;
    msg << "degrees of freedom are not unisolvent (cond " << cond
        << "); functional " << worst << " carries the near-null direction";
    throw std::runtime_error(msg.str());
  }
  return V.inverse().transpose();
}

}  // namespace macrotab
