#pragma once

#include "cellcomplex.hpp"

namespace macrotab {

struct QuadratureRule {
  Mat points;  // nq x d, ambient coordinates
  Vec weights;
  int degree = 0;  // guaranteed polynomial exactness

  int size() const { return static_cast<int>(weights.size()); }
};

/// n-point Gauss-Legendre rule on [0,1]; exact through degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Jacobi rule on [0,1] for the weight (1-x)^alpha, the weight
/// folded into the quadrature weights: sum_i w_i f(x_i) == integral of
/// (1-x)^alpha f(x) for polynomial f of degree <= 2n-1.
QuadratureRule gauss_jacobi(int n, int alpha);

/// Collapsed-coordinate tensor rule on the reference d-simplex (d in
/// {1,2,3}), exact for total degree <= degree.
QuadratureRule simplex_rule(int d, int degree);

/// Affine image of a reference-simplex rule on the simplex spanned by verts
/// ((d+1) x d, row-wise); weights scaled by the volume ratio.
QuadratureRule map_rule(const QuadratureRule& ref, const Mat& verts);

/// simplex_rule(degree) tiled over every subcell of the split. The point
/// count is exactly (base rule size) x (number of subcells) and the rule is
/// exact for functions that are polynomials of degree <= degree on each
/// subcell.
QuadratureRule macro_rule(const SplitSimplicialComplex& c, int degree);

/// Rule on edge `edge_id` of a 2D complex: Gauss-Legendre points in ambient
/// coordinates ordered along the facet tangent, weights carrying arc length.
QuadratureRule facet_rule(const SimplicialComplex& c, int edge_id, int degree);

/// A rule exact for integrands that are piecewise polynomials of the given
/// degree on both splits: the macro rule of whichever child refines the
/// other. Errors if neither is a refinement.
QuadratureRule common_rule(const SplitSimplicialComplex& a,
                           const SplitSimplicialComplex& b, int degree);

}  // namespace macrotab
