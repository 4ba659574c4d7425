#pragma once

#include "macrotab/transform.hpp"

#include <Eigen/Sparse>

#include <array>
#include <cstdint>
#include <functional>
#include <utility>

namespace macrotab {

using SpMat = Eigen::SparseMatrix<double>;

/// Conforming triangulation with lexicographically numbered edges and
/// incidence-derived boundary flags. Cells keep counterclockwise vertex
/// order; edge ids sort by ascending global vertex pair.
struct Mesh {
  Mat vertices;                                // nv x 2
  std::vector<std::array<int, 3>> cells;       // global vertex triples, ccw
  std::vector<std::array<int, 2>> edges;       // ascending pairs, sorted
  std::vector<std::array<int, 3>> cell_edges;  // per cell: local pairs {01,02,12}
  std::vector<bool> vertex_boundary;
  std::vector<bool> edge_boundary;

  int num_vertices() const { return static_cast<int>(vertices.rows()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  Mat cell_coords(int c) const;
};

/// N x N squares on the unit square, each split into two right triangles.
/// Interior vertices are displaced componentwise by uniform offsets in
/// [-perturb/N, perturb/N], drawn in vertex order from mt19937_64(seed).
Mesh structured_mesh(int N, double perturb = 0.0, std::uint64_t seed = 2024);

/// Global numbering for one element species: vertex blocks, then edge
/// blocks, then per-cell interior blocks. Shared entities share dofs; an
/// edge dof flagged by the element flips sign in cells whose local edge
/// runs against the global low-to-high vertex order.
struct DofMap {
  int total = 0;
  int per_vertex = 0, per_edge = 0, per_cell = 0;
  std::vector<std::vector<int>> cell_dofs;      // [cell][local] -> global
  std::vector<std::vector<double>> cell_signs;  // +-1, aligned with cell_dofs
  std::vector<int> boundary;                    // dofs on boundary entities, ascending
};

DofMap build_dofmap(const Mesh& mesh, const MacroElement& reference);

/// Assembled system kept at full size: `eliminated` lists the dof ids whose
/// rows and columns a solve must drop (homogeneous strong conditions), and
/// the final `nconstraints` rows/columns hold appended scalar constraints
/// (for example a mean-zero pressure multiplier).
struct LinearSystem {
  SpMat matrix;
  Vec rhs;
  std::vector<int> eliminated;
  int nconstraints = 0;
};

using ScalarField = std::function<double(double, double)>;
/// value, d/dx, d/dy, d2/dxx, d2/dxy, d2/dyy
using ScalarSolution = std::function<std::array<double, 6>(double, double)>;

/// Clamped-plate operator a(u,v) = int LapU LapV
///   - (1-nu)(2 u_xx v_yy + 2 u_yy v_xx - 4 u_xy v_xy),
/// assembled cell by cell from transform-plan tabulations with macro
/// quadrature of degree 2k. Elimination record: every dof attached to a
/// boundary vertex or boundary edge.
LinearSystem assemble_biharmonic(const Mesh& mesh, const MacroElement& reference,
                                 double nu, const ScalarField& f);

/// Velocity block of vector continuous macro quadratics and a discontinuous
/// linear pressure, both on the barycentric split; unit viscosity. Layout:
/// velocity dofs 2*s+c for scalar dof s and component c, then cell-major
/// pressure dofs, then one mean-zero pressure multiplier row. Dirichlet
/// velocity dofs on the boundary enter the elimination record. The default
/// load drives the manufactured solution below.
LinearSystem assemble_stokes_sv(const Mesh& mesh, int k = 2,
                                const ScalarField* fx = nullptr,
                                const ScalarField* fy = nullptr);

/// Drop eliminated rows/columns, factor with SparseLU, verify the residual
/// (<= 1e-9 relative), and scatter back to full length with zeros in the
/// eliminated slots.
Vec solve_direct(const LinearSystem& sys);

/// L2 norm and H1/H2 seminorms of (u_h - exact), macro quadrature of degree
/// 2k+2 per cell.
std::array<double, 3> error_norms(const Mesh& mesh, const MacroElement& reference,
                                  const Vec& coeffs, const ScalarSolution& exact);

/// Global interpolant: per-cell physical duals applied to f, written through
/// the dof map (sign-adjusted so both incident cells agree).
Vec interpolate(const Mesh& mesh, const MacroElement& reference,
                const PointFunction& f);

/// sqrt( sum_K |div u|^2_K + sum_e h_e^-1 |[u . n]|^2_e ) for an interleaved
/// vector field over the scalar reference element; the facet jumps (an H1
/// conformity audit) run over interior mesh edges.
double div_norm(const Mesh& mesh, const MacroElement& scalar_reference,
                const Vec& velocity_coeffs);

/// Velocity and pressure L2 errors for a Stokes coefficient vector in the
/// assemble_stokes_sv layout.
std::array<double, 2> stokes_error_norms(const Mesh& mesh, const Vec& coeffs,
                                         const ScalarField& u1, const ScalarField& u2,
                                         const ScalarField& p);

struct SparsityInfo {
  int rows = 0;
  double avg_nnz_per_row = 0.0;
};

/// Rows and mean structural nonzeros per row of the principal block
/// (appended constraint rows excluded), before or after applying the
/// elimination record.
SparsityInfo sparsity_report(const LinearSystem& sys, bool after_elimination = false);

/// rate_i = log(e_i/e_{i+1}) / log(h_i/h_{i+1}) for successive (h, e) pairs.
std::vector<double> convergence_rates(const std::vector<std::pair<double, double>>& levels);

/// Manufactured clamped-plate solution u = (x(1-x)y(1-y))^2 with derivatives,
/// and its bilaplacian as the matching load.
ScalarSolution plate_solution();
ScalarField plate_load();

/// Manufactured Stokes pair: u = curl psi with psi = x^2(1-x)^2 y^2(1-y)^2
/// (divergence free, zero on the boundary) and mean-zero p = x^3+y^3-1/2;
/// loads f = -Lap u + grad p for unit viscosity.
std::array<ScalarField, 3> stokes_solution();
std::array<ScalarField, 2> stokes_load();

struct ConvergenceRow {
  int n = 0;       // mesh parameter N
  int dofs = 0;    // matrix rows before elimination (constraints excluded)
  std::array<double, 3> errors{};  // biharmonic: L2, H1, H2; Stokes: vel, p, div
};

/// Assemble-solve-measure sweeps used by the command line driver and the
/// acceptance checks: perturbed structured meshes, seed 2024 by default.
std::vector<ConvergenceRow> biharmonic_sweep(const std::string& element_name,
                                             int degree, const std::vector<int>& Ns,
                                             double nu, double perturb,
                                             std::uint64_t seed = 2024);
std::vector<ConvergenceRow> stokes_sweep(const std::vector<int>& Ns, double perturb,
                                         std::uint64_t seed = 2024);

}  // namespace macrotab
