#pragma once

#include "types.hpp"

#include <memory>
#include <utility>

namespace macrotab {

/// A finite simplicial complex with explicit vertex coordinates.
///
/// Entities of each dimension are numbered lexicographically by their sorted
/// vertex-id tuple, so ids are stable across runs. topology[d][i] is the
/// sorted vertex tuple of entity i of dimension d; topology[0][i] == {i}.
struct SimplicialComplex {
  int dim = 0;
  Mat vertices;  // nv x dim
  std::vector<std::vector<std::vector<int>>> topology;

  int num_vertices() const { return static_cast<int>(vertices.rows()); }
  int num_entities(int d) const { return static_cast<int>(topology[d].size()); }
  int num_cells() const { return num_entities(dim); }
  const std::vector<int>& entity(int d, int i) const { return topology[d][i]; }

  /// Coordinates of an entity's vertices, one per row.
  Mat entity_coords(int d, int i) const;

  /// Id of the entity with this (unsorted accepted) vertex tuple, -1 if absent.
  int entity_id(int d, std::vector<int> verts) const;

  /// Ids of the dsub-dimensional entities in the closure of entity (d, i),
  /// in lexicographic order.
  std::vector<int> sub_entities(int d, int i, int dsub) const;

  /// Ids of the d-dimensional entities whose closure contains entity
  /// (dsub, isub).
  std::vector<int> super_entities(int d, int dsub, int isub) const;

  /// Barycentric coordinates of x with respect to cell i (dim+1 values).
  Vec barycentric(int cell, const Vec& x) const;

  /// True if x lies in the closure of entity (d, i), within tol measured in
  /// barycentric coordinates (and distance to the affine hull for d < dim).
  bool entity_contains(int d, int i, const Vec& x, double tol = 1e-12) const;

  /// Ids of all cells whose closure contains x, ascending.
  std::vector<int> cells_containing(const Vec& x, double tol = 1e-12) const;

  /// d-dimensional volume of cell i.
  double cell_volume(int i) const;
};

/// Assemble a complex from vertices and top-dimensional cells; all lower
/// entities are generated and numbered lexicographically.
SimplicialComplex build_complex(const Mat& vertices,
                                const std::vector<std::vector<int>>& cells, int dim);

/// The reference d-simplex (d in {1,2,3}): vertices at the origin and the
/// unit coordinate points, as a one-cell complex.
SimplicialComplex reference_simplex(int d);

/// Vertices of the reference d-simplex, one per row.
Mat reference_simplex_vertices(int d);

enum class SplitKind { None, Alfeld, Iso, PowellSabin6, PowellSabin12 };

/// A single simplex together with a simplicial subdivision of it.
///
/// Parent vertices keep their ids in the child complex; split vertices are
/// appended in the documented construction order of each split.
struct SplitSimplicialComplex {
  SplitKind kind = SplitKind::None;
  int param = 0;  // iso subdivision level
  SimplicialComplex parent;
  SimplicialComplex child;
  /// parent_entity[d][i]: the lowest-dimensional parent entity whose closure
  /// contains child entity (d, i), as a (dim, id) pair.
  std::vector<std::vector<std::pair<int, int>>> parent_entity;

  int dim() const { return parent.dim; }
  int num_subcells() const { return child.num_cells(); }
};

/// Trivial split: the child complex is the parent simplex itself.
SplitSimplicialComplex no_split(const Mat& cell_verts);

/// Barycentric (Alfeld) split: connect the barycenter to all facets, giving
/// d+1 subcells. Works in any dimension.
SplitSimplicialComplex alfeld_split(const Mat& cell_verts);

/// Uniform iso-l split into l^d congruent-volume subcells (d in {1, 2}).
SplitSimplicialComplex iso_split(const Mat& cell_verts, int ell);

/// Powell-Sabin splits of a triangle. variant = 6: the three medians through
/// the barycenter (6 subcells, 7 vertices). variant = 12: medians plus the
/// three midlines, whose crossings add the midline midpoints (12 subcells,
/// 10 vertices).
SplitSimplicialComplex powell_sabin_split(const Mat& cell_verts, int variant);

/// True if every cell of `fine` is contained in the closure of a single cell
/// of `coarse`. Reflexive; containment measured in barycentric coordinates.
bool is_refinement_of(const SimplicialComplex& fine, const SimplicialComplex& coarse,
                      double tol = 1e-12);

/// Orthonormal frame of a codim-1 facet of a 2D complex. The tangent points
/// from the lower to the higher vertex id; the normal is the tangent rotated
/// by -90 degrees, flipped to point outward if the facet lies on the domain
/// boundary.
struct FacetFrame {
  Vec2 a, b;  // endpoints in tangent order
  Vec2 tangent, normal;
  double length = 0.0;
};

FacetFrame facet_frame(const SimplicialComplex& c, int edge_id);
std::vector<FacetFrame> facet_frames(const SimplicialComplex& c);

}  // namespace macrotab
