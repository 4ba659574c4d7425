#pragma once

#include "types.hpp"

namespace macrotab {

/// Dimension of P_degree on the d-simplex.
int dubiner_size(int d, int degree);

/// Orthonormal (L2 on the reference d-simplex) hierarchical polynomial basis,
/// tabulated with all derivatives through max_deriv (<= 2) at the given
/// points. The recurrence is polynomial in the coordinates, so points on the
/// collapsed edge are safe. Members are graded by total degree; the leading
/// dubiner_size(d, k) members span P_k for every k <= degree. d in {1, 2}.
TabulatedValues dubiner_tabulate(int d, int degree, const Mat& pts, int max_deriv);

}  // namespace macrotab
