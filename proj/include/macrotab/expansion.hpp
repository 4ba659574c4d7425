#pragma once

#include "macrotab/cellcomplex.hpp"
#include "macrotab/dubiner.hpp"
#include "macrotab/types.hpp"

#include <memory>
#include <vector>

namespace macrotab {

enum class Continuity { DG, C0, Constrained };

// Piecewise polynomial set over a split cell.  Every member is stored as a
// coefficient row over the "frame": per-subcell orthonormal bases, affinely
// mapped and scaled by sqrt(|K_ref| / |subcell|) so the frame Gram matrix
// over the whole macrocell is exactly the identity.
struct ExpansionSet {
  std::shared_ptr<const SplitSimplicialComplex> complex;
  int degree = 0;
  Continuity continuity = Continuity::DG;
  int block = 0;               // scalar frame functions per subcell
  int ncomp = 1;               // value components per member
  Mat coeff;                   // nloc x (block * num_subcells * ncomp)
  Mat nodes;                   // C0 sets: glued lattice point per member

  // Per-subcell affine map x = origin + E * xref (unit simplex -> subcell).
  std::vector<Vec> origin;
  std::vector<Mat> emap;
  std::vector<Mat> einv;
  std::vector<double> scale;

  int nloc() const { return static_cast<int>(coeff.rows()); }
  int frame_size() const { return block * static_cast<int>(emap.size()); }

  // Subcell owning each evaluation point; ties broken by smallest subcell id.
  std::vector<int> owners(const Mat& pts) const;

  // Scalar frame tabulation: frame_size() x npts per derivative, each point
  // evaluated in its owner subcell only (other subcells contribute zero).
  TabulatedValues tabulate_frame(const Mat& pts, int max_deriv,
                                 const std::vector<int>* owner = nullptr) const;

  // Member tabulation: nloc() x (npts * ncomp) per derivative, components
  // interleaved per point.
  TabulatedValues tabulate(const Mat& pts, int max_deriv,
                           const std::vector<int>* owner = nullptr) const;
};

// DG (coeff = identity) or glued C0 Lagrange lattice over the split.
ExpansionSet macro_expansion(std::shared_ptr<const SplitSimplicialComplex> complex,
                             int degree, Continuity continuity);

// ncomp independent copies of a scalar set; member (j, c) carries the scalar
// member j in component c, with the component index running fastest.
ExpansionSet vector_expansion(const ExpansionSet& base, int ncomp);

// Null space of constraint * coeff^T: members of `base` annihilated by every
// row of `constraint` (columns indexed like base.coeff rows).  Singular
// values below cutoff * sigma_max are treated as zero.
ExpansionSet constrained_expansion(const ExpansionSet& base, const Mat& constraint,
                                   double cutoff = 1e-10);

}  // namespace macrotab
