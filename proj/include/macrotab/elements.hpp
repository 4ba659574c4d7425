#pragma once

#include "macrotab/dualset.hpp"
#include "macrotab/expansion.hpp"

#include <string>
#include <vector>

namespace macrotab {

enum class MappingKind { Affine, HermiteType, HctType, PiolaDouble, OracleRebuild };

struct MacroElement {
  std::string name;
  int degree = 1;
  int ncomp = 1;  // 1 scalar, 2 vector, 3 symmetric tensor (xx, xy, yy)
  std::shared_ptr<const SplitSimplicialComplex> complex;
  ExpansionSet span;
  std::vector<Functional> duals;
  Mat nodal;  // row i = coefficients of nodal basis function i over span
  std::vector<std::string> dof_labels;
  std::vector<std::pair<int, int>> dof_entity;  // (dim, parent entity id)
  // True where the dof changes sign when the owning edge is traversed
  // against the global low-to-high orientation.
  std::vector<bool> dof_flips;
  double cond_vandermonde = 1.0;
  MappingKind mapping = MappingKind::OracleRebuild;

  int ndof() const { return static_cast<int>(nodal.rows()); }
  std::vector<std::vector<std::vector<int>>> entity_dofs() const;
  TabulatedValues tabulate(const Mat& pts, int max_deriv,
                           const std::vector<int>* owner = nullptr) const;
  // Coefficient vector interpolating f, one entry per dof.
  Vec interpolate(const PointFunction& f) const;
};

struct CostModel {
  long long ndof = 0;
  long long nq_ref = 0;
  long long subcells = 0;
  long long nq = 0;  // nq_ref * subcells
  long long work = 0;  // ndof^2 * nq_ref * subcells
};
CostModel cost(const MacroElement& el, int nq_ref);

// Piecewise Lagrange over a split: C0 glues the lattice pointwise, DG takes
// per-subcell orthonormal moments.
MacroElement make_lagrange_macro(const Mat& cell_verts, SplitKind split, int param,
                                 int degree, Continuity continuity);

// C1 cubics/quartics on the Alfeld split; reduced drops the edge nodes by
// constraining the normal derivative on each edge to be linear.
MacroElement make_hct(const Mat& cell_verts, int k, bool reduced);

// Twelve-node companion of the reduced element: the cubic C1 span with
// vertex data plus one P2-weighted normal kill-moment per edge. The reduced
// element keeps its first nine nodal functions; the transform of the reduced
// element runs through this element's node set.
MacroElement make_hct_extended(const Mat& cell_verts);

// C1 quadratics on the 6- or 12-way Powell-Sabin split.
MacroElement make_powell_sabin(const Mat& cell_verts, int variant);

// H(div) symmetric-tensor piecewise linears on the Alfeld split, dim 15.
MacroElement make_johnson_mercier(const Mat& cell_verts);

// Johnson-Mercier degrees of freedom over an Alfeld split, in catalogue
// order: per edge both normal-trace rows against {1, shat}, then the three
// interior component averages. Usable without constructing the span.
std::vector<Functional> johnson_mercier_duals(const SplitSimplicialComplex& split);

// Vector quadratics on the Alfeld split with continuous divergence, dim 15.
MacroElement make_alfeld_sorokina(const Mat& cell_verts);

// Name-based dispatch: hct/hct3/hct4/hct-red/hctred, ps6, ps12,
// johnson-mercier/jm, alfeld-sorokina/as, lagrange (with split/continuity).
MacroElement make_element(const std::string& name, int degree, const Mat& cell_verts,
                          SplitKind split = SplitKind::Alfeld, int param = 0,
                          Continuity continuity = Continuity::C0);

// Edge frame without boundary flip: tangent runs from the lower to the
// higher local vertex id, normal is the tangent rotated -90 degrees, so two
// cells sharing an edge agree on both vectors.
FacetFrame element_edge_frame(const SimplicialComplex& parent, int edge);

}  // namespace macrotab
