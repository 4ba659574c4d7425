#pragma once

#include "macrotab/expansion.hpp"
#include "macrotab/types.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace macrotab {

// One weighted sample inside a functional: weight times the deriv-th partial
// of component comp at point, read in subcell `owner` (-1 lets the smallest
// containing subcell win).
struct FunctionalTerm {
  Vec point;
  Deriv deriv{0, 0, 0};
  int comp = 0;
  double weight = 1.0;
  int owner = -1;
};

struct Functional {
  std::vector<FunctionalTerm> terms;
  int max_order() const;
};

// f(x, deriv, comp) -> the deriv-th partial of component comp at x.
using PointFunction = std::function<double(const Vec&, const Deriv&, int)>;

double evaluate(const Functional& L, const PointFunction& f);
Vec evaluate_all(const std::vector<Functional>& Ls, const PointFunction& f);

Functional point_eval(const Vec& p, int comp = 0, int owner = -1);
Functional point_deriv(const Vec& p, const Deriv& d, int comp = 0, int owner = -1);
Functional directional_deriv(const Vec& p, const Vec& dir, int comp = 0, int owner = -1);

// Quadrature-discretized moment:
//   L(f) = scale * sum_q w(q) sum_s g(q, s) (d^{slots[s].first} f_{slots[s].second})(pts_q)
Functional moment(const Mat& pts, const Vec& w,
                  const std::vector<std::pair<Deriv, int>>& slots, const Mat& g,
                  double scale = 1.0, int owner = -1);

void append_scaled(Functional& dst, const Functional& src, double s);

// V(i, j) = L_i(member j).
Mat vandermonde(const std::vector<Functional>& Ls, const ExpansionSet& set);

// Nodal coefficient matrix A = V^{-T}; throws when cond(V) exceeds
// cond_limit, naming the functional carrying the near-null direction.
Mat invert_vandermonde(const Mat& V, double cond_limit = 1e12,
                       double* cond_out = nullptr);

}  // namespace macrotab
