#pragma once

#include "types.hpp"

namespace macrotab {

/// Jacobi polynomial P_i^(alpha,beta) on [-1,1] in the standard
/// normalization (P_i(1) = binom(i+alpha, i)), evaluated by the three-term
/// recurrence with derivative propagation; deriv <= 2.
double jacobi(int alpha, int beta, int i, double x, int deriv = 0);

/// Values (or a derivative) of P_0..P_n at a batch of points; out(i, q).
Mat jacobi_batch(int alpha, int beta, int n, const Vec& x, int deriv = 0);

}  // namespace macrotab
