#pragma once

#include "macrotab/elements.hpp"

#include <array>
#include <memory>

namespace macrotab {

// Geometry of the affine map F from a physical cell onto a reference cell,
// with F(v_i) = vhat_i vertexwise, so physical and reference entities of
// equal local id correspond. J is the (constant) Jacobian of F; mapping this
// way keeps the transform formulas inverse-free.
struct CellGeometry {
  Mat physical_vertices;   // 3 x 2, rows are vertices
  Mat reference_vertices;  // 3 x 2
  Mat2 J;                  // F(x) = J x + shift
  Vec2 shift;
  double detJ = 0.0;
  // Lexicographic edge order {0,1}, {0,2}, {1,2}; frames hold [n t] in
  // columns with t running from the lower to the higher local vertex.
  std::array<double, 3> edge_lengths{};
  std::array<double, 3> ref_edge_lengths{};
  std::array<Mat2, 3> frames{};
  std::array<Mat2, 3> ref_frames{};

  Vec2 map(const Vec2& x) const { return J * x + shift; }
};

CellGeometry geometry(const Mat& physical_vertices, const Mat& reference_vertices);
// Reference defaults to the unit right triangle (0,0), (1,0), (0,1).
CellGeometry geometry(const Mat& physical_vertices);

// Factors of V = E * Vc * D for inspection; M = V^T.
struct HctFactors {
  Mat E, Vc, D;
};

// Fast-path matrix builders. Each returns M with
//   physical nodal basis = M * (pulled-back reference nodal basis).
Mat hermite_transform(const CellGeometry& g);  // 9x9: point values and gradients
// 12x12 for the cubic element and its 12-dof quadratic sibling: vertex
// blocks diag(1, J^{-T}), one averaged-normal/raw-tangential moment pair per
// edge, tangential rows eliminated through the fundamental theorem of
// calculus.
Mat hct_transform(const CellGeometry& g, HctFactors* factors = nullptr);
// k >= 4: per-edge Jacobi moment pairs for each weight index, trace moments
// invariant in the normalized edge coordinate, interior orthonormal moments
// scaling with sqrt(|detJ|).
Mat highorder_hct_transform(const CellGeometry& g, int k,
                            HctFactors* factors = nullptr);
// 12x12 transform of the extended element carrying the P2 kill-moments.
Mat extended_hct_transform(const CellGeometry& g, HctFactors* factors = nullptr);
// 9x12: the first nine rows of the extended transform; columns index the
// twelve extended reference basis functions.
Mat reduced_hct_transform(const CellGeometry& g, HctFactors* factors = nullptr);
// 15x15 numeric push-forward through the double contravariant Piola map
// sigma = (detJ)^2 J^{-1} sigma_hat J^{-T}: rebuild only the physical node
// set, evaluate it on the mapped reference basis, and invert.
Mat piola_double_transform(const CellGeometry& g, const MacroElement& reference);

// The element rebuilt directly on the physical cell (physical split,
// physical functionals); ground truth for every fast path and the
// production path for elements without one.
MacroElement oracle_rebuild(const MacroElement& reference,
                            const Mat& physical_vertices);

// Pullback of the reference basis to the physical cell, tabulated at
// physical points: compose with F and chain-rule derivatives through J; the
// double-Piola map additionally mixes tensor components.
TabulatedValues pullback_tabulation(const MacroElement& reference,
                                    const CellGeometry& g, const Mat& points,
                                    int max_deriv, bool piola_double = false,
                                    const std::vector<int>* owner = nullptr);

struct TransformPlan {
  MacroElement element;  // the reference element
  // Companion carrying the nodal completion when the element's own node set
  // cannot be pushed forward (reduced cubic element only).
  std::shared_ptr<const MacroElement> extended;

  // Columns of M: the number of reference basis functions pulled back.
  int pullback_size() const;
  // Throws for elements whose production path is the physical rebuild.
  Mat matrix(const CellGeometry& g) const;
  // Physical basis tabulated at physical points; falls back to the rebuild
  // when no fast path exists.
  TabulatedValues tabulate(const Mat& physical_vertices, const Mat& points,
                           int max_deriv,
                           const std::vector<int>* owner = nullptr) const;
};

TransformPlan transform_plan(const MacroElement& reference_element);

}  // namespace macrotab
