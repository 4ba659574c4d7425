#include "macrotab/meshfem.hpp"

#include "macrotab/quadrature.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace macrotab {

namespace {

constexpr std::array<std::array<int, 2>, 3> kLocalEdges{{{0, 1}, {0, 2}, {1, 2}}};

double unit_draw(std::mt19937_64& rng)
{
  // Fixed bits-to-[0,1) mapping; uniform_real_distribution is not pinned
  // across standard libraries and outputs here must be reproducible.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SplitSimplicialComplex split_like(const SplitSimplicialComplex& reference,
                                  const Mat& verts)
{
  switch (reference.kind) {
    case SplitKind::None: return no_split(verts);
    case SplitKind::Alfeld: return alfeld_split(verts);
    case SplitKind::Iso: return iso_split(verts, reference.param);
    case SplitKind::PowellSabin6: return powell_sabin_split(verts, 6);
    case SplitKind::PowellSabin12: return powell_sabin_split(verts, 12);
  }
  throw std::logic_error("split_like: unknown split kind");
}

// Physical-cell macro rule plus the subcell owner of every point (macro_rule
// orders points subcell-major).
QuadratureRule cell_rule(const MacroElement& reference, const Mat& verts, int degree,
                         std::vector<int>& owners)
{
  const SplitSimplicialComplex split = split_like(*reference.complex, verts);
  QuadratureRule rule = macro_rule(split, degree);
  const int base = rule.size() / split.num_subcells();
  owners.resize(rule.size());
  for (int i = 0; i < rule.size(); ++i) owners[i] = i / base;
  return rule;
}

// Gathers the dofs each incident cell owes an entity and their slot order.
struct EntityCounts {
  int per_vertex = 0, per_edge = 0, per_cell = 0;
  std::vector<int> slot;  // local dof -> position within its entity block
};

EntityCounts entity_counts(const MacroElement& reference)
{
  const auto ed = reference.entity_dofs();
  EntityCounts ec;
  ec.per_vertex = static_cast<int>(ed[0][0].size());
  ec.per_edge = static_cast<int>(ed[1][0].size());
  ec.per_cell = static_cast<int>(ed[2][0].size());
  for (int v = 0; v < 3; ++v)
    if (static_cast<int>(ed[0][v].size()) != ec.per_vertex)
      throw std::invalid_argument("dofmap: uneven vertex dof counts");
  for (int e = 0; e < 3; ++e)
    if (static_cast<int>(ed[1][e].size()) != ec.per_edge)
      throw std::invalid_argument("dofmap: uneven edge dof counts");
  ec.slot.assign(reference.ndof(), 0);
  for (int d = 0; d <= 2; ++d)
    for (const auto& dofs : ed[d])
      for (size_t s = 0; s < dofs.size(); ++s)
        ec.slot[dofs[s]] = static_cast<int>(s);
  return ec;
}

std::vector<std::vector<int>> edge_cells(const Mesh& mesh)
{
  std::vector<std::vector<int>> out(mesh.num_edges());
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int e = 0; e < 3; ++e) out[mesh.cell_edges[c][e]].push_back(c);
  return out;
}

// Local coefficients of a global vector on one cell, sign-adjusted.
Vec local_coeffs(const DofMap& dm, const Vec& global, int c)
{
  const auto& dofs = dm.cell_dofs[c];
  Vec out(dofs.size());
  for (size_t l = 0; l < dofs.size(); ++l)
    out(static_cast<int>(l)) = dm.cell_signs[c][l] * global(dofs[l]);
  return out;
}

// x^2 (1-x)^2 and its first four derivatives.
std::array<double, 5> bump(double x)
{
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x;
  return {x2 - 2 * x3 + x4, 2 * x - 6 * x2 + 4 * x3, 2 - 12 * x + 12 * x2,
          -12 + 24 * x, 24.0};
}

}  // namespace

Mat Mesh::cell_coords(int c) const
{
  Mat out(3, 2);
  for (int v = 0; v < 3; ++v) out.row(v) = vertices.row(cells[c][v]);
  return out;
}

Mesh structured_mesh(int N, double perturb, std::uint64_t seed)
{
  if (N < 1) throw std::invalid_argument("structured_mesh: N must be positive");
  if (perturb < 0.0 || perturb >= 0.5)
    throw std::invalid_argument("structured_mesh: perturb must lie in [0, 0.5)");

  Mesh mesh;
  const int m = N + 1;
  mesh.vertices.resize(m * m, 2);
  std::mt19937_64 rng(seed);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      double x = static_cast<double>(i) / N, y = static_cast<double>(j) / N;
      if (i > 0 && i < N && j > 0 && j < N) {
        x += (2.0 * unit_draw(rng) - 1.0) * perturb / N;
        y += (2.0 * unit_draw(rng) - 1.0) * perturb / N;
      }
      mesh.vertices.row(j * m + i) << x, y;
    }

  const auto vid = [m](int i, int j) { return j * m + i; };
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }

  std::vector<std::array<int, 2>> pairs;
  for (const auto& cell : mesh.cells)
    for (const auto& le : kLocalEdges) {
      int a = cell[le[0]], b = cell[le[1]];
      pairs.push_back({std::min(a, b), std::max(a, b)});
    }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  mesh.edges = pairs;

  std::vector<int> incidence(mesh.edges.size(), 0);
  for (const auto& cell : mesh.cells) {
    std::array<int, 3> ids{};
    for (int e = 0; e < 3; ++e) {
      int a = cell[kLocalEdges[e][0]], b = cell[kLocalEdges[e][1]];
      const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      const auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key);
      ids[e] = static_cast<int>(it - mesh.edges.begin());
      ++incidence[ids[e]];
    }
    mesh.cell_edges.push_back(ids);
  }

  mesh.vertex_boundary.assign(m * m, false);
  mesh.edge_boundary.assign(mesh.edges.size(), false);
  for (size_t e = 0; e < mesh.edges.size(); ++e)
    if (incidence[e] == 1) {
      mesh.edge_boundary[e] = true;
      mesh.vertex_boundary[mesh.edges[e][0]] = true;
      mesh.vertex_boundary[mesh.edges[e][1]] = true;
    }
  return mesh;
}

DofMap build_dofmap(const Mesh& mesh, const MacroElement& reference)
{
  const EntityCounts ec = entity_counts(reference);
  DofMap dm;
  dm.per_vertex = ec.per_vertex;
  dm.per_edge = ec.per_edge;
  dm.per_cell = ec.per_cell;
  const int nvert = mesh.num_vertices(), nedge = mesh.num_edges();
  const int edge_base = nvert * ec.per_vertex;
  const int cell_base = edge_base + nedge * ec.per_edge;
  dm.total = cell_base + mesh.num_cells() * ec.per_cell;

  dm.cell_dofs.resize(mesh.num_cells());
  dm.cell_signs.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    auto& dofs = dm.cell_dofs[c];
    auto& signs = dm.cell_signs[c];
    dofs.resize(reference.ndof());
    signs.assign(reference.ndof(), 1.0);
    for (int l = 0; l < reference.ndof(); ++l) {
      const auto [d, ent] = reference.dof_entity[l];
      if (d == 0) {
        dofs[l] = mesh.cells[c][ent] * ec.per_vertex + ec.slot[l];
      } else if (d == 1) {
        const int ge = mesh.cell_edges[c][ent];
        dofs[l] = edge_base + ge * ec.per_edge + ec.slot[l];
        const bool reversed =
            mesh.cells[c][kLocalEdges[ent][0]] > mesh.cells[c][kLocalEdges[ent][1]];
        if (reversed && reference.dof_flips[l]) signs[l] = -1.0;
      } else {
        dofs[l] = cell_base + c * ec.per_cell + ec.slot[l];
      }
    }
  }

  for (int v = 0; v < nvert; ++v)
    if (mesh.vertex_boundary[v])
      for (int r = 0; r < ec.per_vertex; ++r)
        dm.boundary.push_back(v * ec.per_vertex + r);
  for (int e = 0; e < nedge; ++e)
    if (mesh.edge_boundary[e])
      for (int r = 0; r < ec.per_edge; ++r)
        dm.boundary.push_back(edge_base + e * ec.per_edge + r);
  return dm;
}

LinearSystem assemble_biharmonic(const Mesh& mesh, const MacroElement& reference,
                                 double nu, const ScalarField& f)
{
  if (nu <= 0.0 || nu >= 1.0)
    throw std::invalid_argument("assemble_biharmonic: nu must lie in (0, 1)");
  const TransformPlan plan = transform_plan(reference);
  const DofMap dm = build_dofmap(mesh, reference);
  const int n = reference.ndof();

  std::vector<Eigen::Triplet<double>> triplets;
  Vec rhs = Vec::Zero(dm.total);
  std::vector<int> owners;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Mat verts = mesh.cell_coords(c);
    const QuadratureRule rule = cell_rule(reference, verts, 2 * reference.degree, owners);
    const TabulatedValues tab = plan.tabulate(verts, rule.points, 2, &owners);
    const auto W = rule.weights.asDiagonal();
    const Mat lap = tab[3] + tab[5];
    Mat Ke = lap * W * lap.transpose();
    Ke -= (1.0 - nu) * (2.0 * tab[3] * W * tab[5].transpose() +
                        2.0 * tab[5] * W * tab[3].transpose() -
                        4.0 * tab[4] * W * tab[4].transpose());
    Vec fw(rule.size());
    for (int q = 0; q < rule.size(); ++q)
      fw(q) = rule.weights(q) * f(rule.points(q, 0), rule.points(q, 1));
    const Vec fe = tab[0] * fw;

    const auto& dofs = dm.cell_dofs[c];
    const auto& signs = dm.cell_signs[c];
    for (int i = 0; i < n; ++i) {
      rhs(dofs[i]) += signs[i] * fe(i);
      for (int j = 0; j < n; ++j)
        triplets.emplace_back(dofs[i], dofs[j], signs[i] * signs[j] * Ke(i, j));
    }
  }

  LinearSystem sys;
  sys.matrix.resize(dm.total, dm.total);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = rhs;
  sys.eliminated = dm.boundary;
  return sys;
}

LinearSystem assemble_stokes_sv(const Mesh& mesh, int k, const ScalarField* fx,
                                const ScalarField* fy)
{
  if (k != 2) throw std::invalid_argument("assemble_stokes_sv: only k = 2 is supported");
  const auto loads = stokes_load();
  const ScalarField& f1 = fx ? *fx : loads[0];
  const ScalarField& f2 = fy ? *fy : loads[1];
  const double nu = 1.0;

  const Mat ref_verts = reference_simplex_vertices(2);
  const MacroElement vref = make_element("lagrange", 2, ref_verts);
  const MacroElement pref = make_element("lagrange-dg", 1, ref_verts);
  const TransformPlan vplan = transform_plan(vref);
  const TransformPlan pplan = transform_plan(pref);
  const DofMap vdm = build_dofmap(mesh, vref);
  const int sv = vdm.total, npc = pref.ndof();
  const int nvel = 2 * sv, np = npc * mesh.num_cells();
  const int total = nvel + np + 1;

  std::vector<Eigen::Triplet<double>> triplets;
  Vec rhs = Vec::Zero(total);
  std::vector<int> owners;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Mat verts = mesh.cell_coords(c);
    const QuadratureRule rule = cell_rule(vref, verts, 2 * k, owners);
    const TabulatedValues vt = vplan.tabulate(verts, rule.points, 1, &owners);
    const TabulatedValues pt = pplan.tabulate(verts, rule.points, 0, &owners);
    const auto W = rule.weights.asDiagonal();
    const Mat Gxx = vt[1] * W * vt[1].transpose();
    const Mat Gxy = vt[1] * W * vt[2].transpose();
    const Mat Gyy = vt[2] * W * vt[2].transpose();
    const Mat Bx = -(pt[0] * W * vt[1].transpose());
    const Mat By = -(pt[0] * W * vt[2].transpose());
    Vec f1w(rule.size()), f2w(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      f1w(q) = rule.weights(q) * f1(rule.points(q, 0), rule.points(q, 1));
      f2w(q) = rule.weights(q) * f2(rule.points(q, 0), rule.points(q, 1));
    }
    const Vec fe1 = vt[0] * f1w, fe2 = vt[0] * f2w;
    const Vec pint = pt[0] * rule.weights;

    const auto& sd = vdm.cell_dofs[c];
    const int nl = vref.ndof();
    for (int i = 0; i < nl; ++i) {
      rhs(2 * sd[i]) += fe1(i);
      rhs(2 * sd[i] + 1) += fe2(i);
      for (int j = 0; j < nl; ++j) {
        triplets.emplace_back(2 * sd[i], 2 * sd[j],
                              nu * (2.0 * Gxx(i, j) + Gyy(i, j)));
        triplets.emplace_back(2 * sd[i], 2 * sd[j] + 1, nu * Gxy(j, i));
        triplets.emplace_back(2 * sd[i] + 1, 2 * sd[j], nu * Gxy(i, j));
        triplets.emplace_back(2 * sd[i] + 1, 2 * sd[j] + 1,
                              nu * (2.0 * Gyy(i, j) + Gxx(i, j)));
      }
    }
    for (int p = 0; p < npc; ++p) {
      const int gp = nvel + c * npc + p;
      for (int j = 0; j < nl; ++j) {
        triplets.emplace_back(gp, 2 * sd[j], Bx(p, j));
        triplets.emplace_back(gp, 2 * sd[j] + 1, By(p, j));
        triplets.emplace_back(2 * sd[j], gp, Bx(p, j));
        triplets.emplace_back(2 * sd[j] + 1, gp, By(p, j));
      }
      triplets.emplace_back(total - 1, gp, pint(p));
      triplets.emplace_back(gp, total - 1, pint(p));
    }
  }

  LinearSystem sys;
  sys.matrix.resize(total, total);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = rhs;
  for (int s : vdm.boundary) {
    sys.eliminated.push_back(2 * s);
    sys.eliminated.push_back(2 * s + 1);
  }
  std::sort(sys.eliminated.begin(), sys.eliminated.end());
  sys.nconstraints = 1;
  return sys;
}

Vec solve_direct(const LinearSystem& sys)
{
  const int n = static_cast<int>(sys.matrix.rows());
  std::vector<char> drop(n, 0);
  for (int id : sys.eliminated) drop[id] = 1;
  std::vector<int> old2new(n, -1);
  int nk = 0;
  for (int i = 0; i < n; ++i)
    if (!drop[i]) old2new[i] = nk++;

  std::vector<Eigen::Triplet<double>> triplets;
  for (int col = 0; col < sys.matrix.outerSize(); ++col)
    for (SpMat::InnerIterator it(sys.matrix, col); it; ++it)
      if (!drop[it.row()] && !drop[it.col()])
        triplets.emplace_back(old2new[it.row()], old2new[it.col()], it.value());
  SpMat A(nk, nk);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  Vec b(nk);
  for (int i = 0; i < n; ++i)
    if (!drop[i]) b(old2new[i]) = sys.rhs(i);

  // Value, gradient, and moment dofs scale as different powers of h, so the
  // raw matrix is badly equilibrated. Symmetric row-max scaling removes that
  // spread; the residual contract below is checked on the original system.
  Vec scale = Vec::Zero(nk);
  for (int col = 0; col < A.outerSize(); ++col)
    for (SpMat::InnerIterator it(A, col); it; ++it)
      scale(it.row()) = std::max(scale(it.row()), std::abs(it.value()));
  for (int i = 0; i < nk; ++i)
    scale(i) = scale(i) > 0.0 ? 1.0 / std::sqrt(scale(i)) : 1.0;
  SpMat As = scale.asDiagonal() * A * scale.asDiagonal();
  As.makeCompressed();

  Eigen::SparseLU<SpMat> lu;
  lu.compute(As);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_direct: factorization failed (singular after elimination?)");
  Vec x = scale.asDiagonal() * lu.solve(Vec(scale.asDiagonal() * b));
  // Iterative refinement with extended-precision residuals: the double
  // residual floor eps*|A|*|x| can exceed the contract on fine plate systems.
  const auto residual = [&](const Vec& y) {
    Vec r(nk);
    for (int i = 0; i < nk; ++i) r(i) = 0.0;
    std::vector<long double> acc(nk);
    for (int i = 0; i < nk; ++i) acc[i] = static_cast<long double>(b(i));
    for (int col = 0; col < A.outerSize(); ++col)
      for (SpMat::InnerIterator it(A, col); it; ++it)
        acc[it.row()] -= static_cast<long double>(it.value()) *
                         static_cast<long double>(y(it.col()));
    for (int i = 0; i < nk; ++i) r(i) = static_cast<double>(acc[i]);
    return r;
  };
  const double tol = 1e-9 * std::max(b.norm(), 1e-30);
  Vec r = residual(x);
  double resid = r.norm();
  for (int pass = 0; pass < 4 && resid > tol; ++pass) {
    x += scale.asDiagonal() * lu.solve(Vec(scale.asDiagonal() * r));
    r = residual(x);
    resid = r.norm();
  }
  if (resid > tol) {
    std::ostringstream msg;
    msg << "solve_direct: residual " << resid << " exceeds tolerance " << tol;
    throw std::runtime_error(msg.str());
  }

  Vec full = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    if (!drop[i]) full(i) = x(old2new[i]);
  return full;
}

std::array<double, 3> error_norms(const Mesh& mesh, const MacroElement& reference,
                                  const Vec& coeffs, const ScalarSolution& exact)
{
  const TransformPlan plan = transform_plan(reference);
  const DofMap dm = build_dofmap(mesh, reference);
  double l2 = 0.0, h1 = 0.0, h2 = 0.0;
  std::vector<int> owners;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Mat verts = mesh.cell_coords(c);
    const QuadratureRule rule =
        cell_rule(reference, verts, 2 * reference.degree + 2, owners);
    const TabulatedValues tab = plan.tabulate(verts, rule.points, 2, &owners);
    const Vec lc = local_coeffs(dm, coeffs, c);
    for (int q = 0; q < rule.size(); ++q) {
      const auto ex = exact(rule.points(q, 0), rule.points(q, 1));
      std::array<double, 6> uh{};
      for (int d = 0; d < 6; ++d) uh[d] = tab[d].col(q).dot(lc);
      const double w = rule.weights(q);
      const double e0 = uh[0] - ex[0], e1 = uh[1] - ex[1], e2 = uh[2] - ex[2];
      const double e3 = uh[3] - ex[3], e4 = uh[4] - ex[4], e5 = uh[5] - ex[5];
      l2 += w * e0 * e0;
      h1 += w * (e1 * e1 + e2 * e2);
      h2 += w * (e3 * e3 + 2.0 * e4 * e4 + e5 * e5);
    }
  }
  return {std::sqrt(l2), std::sqrt(h1), std::sqrt(h2)};
}

Vec interpolate(const Mesh& mesh, const MacroElement& reference,
                const PointFunction& f)
{
  const DofMap dm = build_dofmap(mesh, reference);
  Vec out = Vec::Zero(dm.total);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const MacroElement el = oracle_rebuild(reference, mesh.cell_coords(c));
    const Vec vals = el.interpolate(f);
    for (int l = 0; l < el.ndof(); ++l)
      out(dm.cell_dofs[c][l]) = dm.cell_signs[c][l] * vals(l);
  }
  return out;
}

double div_norm(const Mesh& mesh, const MacroElement& scalar_reference,
                const Vec& velocity_coeffs)
{
  const TransformPlan plan = transform_plan(scalar_reference);
  const DofMap dm = build_dofmap(mesh, scalar_reference);
  if (velocity_coeffs.size() != 2 * dm.total)
    throw std::invalid_argument("div_norm: expected an interleaved vector field");

  double acc = 0.0;
  std::vector<int> owners;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Mat verts = mesh.cell_coords(c);
    const QuadratureRule rule =
        cell_rule(scalar_reference, verts, 2 * scalar_reference.degree, owners);
    const TabulatedValues tab = plan.tabulate(verts, rule.points, 1, &owners);
    const auto& sd = dm.cell_dofs[c];
    for (int q = 0; q < rule.size(); ++q) {
      double div = 0.0;
      for (int l = 0; l < scalar_reference.ndof(); ++l)
        div += velocity_coeffs(2 * sd[l]) * tab[1](l, q) +
               velocity_coeffs(2 * sd[l] + 1) * tab[2](l, q);
      acc += rule.weights(q) * div * div;
    }
  }

  // Normal-jump audit across interior mesh edges, h_e^-1 weighted. The
  // velocity space is continuous, so this measures conformity roundoff.
  const auto ec = edge_cells(mesh);
  const QuadratureRule line = gauss_legendre(4);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (ec[e].size() != 2) continue;
    const Vec2 a = mesh.vertices.row(mesh.edges[e][0]).transpose();
    const Vec2 b = mesh.vertices.row(mesh.edges[e][1]).transpose();
    const double len = (b - a).norm();
    const Vec2 t = (b - a) / len;
    const Vec2 nrm(t(1), -t(0));
    Mat pts(line.size(), 2);
    for (int q = 0; q < line.size(); ++q)
      pts.row(q) = (a + line.points(q, 0) * (b - a)).transpose();
    std::array<Mat, 2> un;
    for (int s = 0; s < 2; ++s) {
      const int c = ec[e][s];
      const TabulatedValues tab = plan.tabulate(mesh.cell_coords(c), pts, 0);
      const auto& sd = dm.cell_dofs[c];
      un[s] = Mat::Zero(1, line.size());
      for (int q = 0; q < line.size(); ++q) {
        double ux = 0.0, uy = 0.0;
        for (int l = 0; l < scalar_reference.ndof(); ++l) {
          ux += velocity_coeffs(2 * sd[l]) * tab[0](l, q);
          uy += velocity_coeffs(2 * sd[l] + 1) * tab[0](l, q);
        }
        un[s](0, q) = ux * nrm(0) + uy * nrm(1);
      }
    }
    for (int q = 0; q < line.size(); ++q) {
      const double jump = un[0](0, q) - un[1](0, q);
      // weights carry the unit-interval measure; scale by len for arc
      // length, divide by len for the h^-1 factor.
      acc += line.weights(q) * jump * jump;
    }
  }
  return std::sqrt(acc);
}

std::array<double, 2> stokes_error_norms(const Mesh& mesh, const Vec& coeffs,
                                         const ScalarField& u1, const ScalarField& u2,
                                         const ScalarField& p)
{
  const Mat ref_verts = reference_simplex_vertices(2);
  const MacroElement vref = make_element("lagrange", 2, ref_verts);
  const MacroElement pref = make_element("lagrange-dg", 1, ref_verts);
  const TransformPlan vplan = transform_plan(vref);
  const TransformPlan pplan = transform_plan(pref);
  const DofMap vdm = build_dofmap(mesh, vref);
  const int nvel = 2 * vdm.total, npc = pref.ndof();

  double verr = 0.0, perr = 0.0;
  std::vector<int> owners;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Mat verts = mesh.cell_coords(c);
    const QuadratureRule rule = cell_rule(vref, verts, 2 * vref.degree + 2, owners);
    const TabulatedValues vt = vplan.tabulate(verts, rule.points, 0, &owners);
    const TabulatedValues pt = pplan.tabulate(verts, rule.points, 0, &owners);
    const auto& sd = vdm.cell_dofs[c];
    for (int q = 0; q < rule.size(); ++q) {
      const double x = rule.points(q, 0), y = rule.points(q, 1);
      double uhx = 0.0, uhy = 0.0, ph = 0.0;
      for (int l = 0; l < vref.ndof(); ++l) {
        uhx += coeffs(2 * sd[l]) * vt[0](l, q);
        uhy += coeffs(2 * sd[l] + 1) * vt[0](l, q);
      }
      for (int l = 0; l < npc; ++l) ph += coeffs(nvel + c * npc + l) * pt[0](l, q);
      const double ex = uhx - u1(x, y), ey = uhy - u2(x, y), ep = ph - p(x, y);
      verr += rule.weights(q) * (ex * ex + ey * ey);
      perr += rule.weights(q) * ep * ep;
    }
  }
  return {std::sqrt(verr), std::sqrt(perr)};
}

SparsityInfo sparsity_report(const LinearSystem& sys, bool after_elimination)
{
  const int n = static_cast<int>(sys.matrix.rows()) - sys.nconstraints;
  std::vector<char> drop(sys.matrix.rows(), 0);
  if (after_elimination)
    for (int id : sys.eliminated) drop[id] = 1;
  long long nnz = 0;
  int rows = 0;
  for (int i = 0; i < n; ++i)
    if (!drop[i]) ++rows;
  for (int col = 0; col < n; ++col) {
    if (drop[col]) continue;
    for (SpMat::InnerIterator it(sys.matrix, col); it; ++it)
      if (it.row() < n && !drop[it.row()]) ++nnz;
  }
  SparsityInfo info;
  info.rows = rows;
  info.avg_nnz_per_row = rows ? static_cast<double>(nnz) / rows : 0.0;
  return info;
}

std::vector<double> convergence_rates(const std::vector<std::pair<double, double>>& levels)
{
  if (levels.size() < 2)
    throw std::invalid_argument("convergence_rates: need at least two levels");
  std::vector<double> rates;
  for (size_t i = 0; i + 1 < levels.size(); ++i) {
    const auto [h0, e0] = levels[i];
    const auto [h1, e1] = levels[i + 1];
    if (e0 <= 0.0 || e1 <= 0.0)
      throw std::invalid_argument("convergence_rates: errors must be positive");
    rates.push_back(std::log(e0 / e1) / std::log(h0 / h1));
  }
  return rates;
}

ScalarSolution plate_solution()
{
  return [](double x, double y) {
    const auto g = bump(x), h = bump(y);
    return std::array<double, 6>{g[0] * h[0], g[1] * h[0], g[0] * h[1],
                                 g[2] * h[0], g[1] * h[1], g[0] * h[2]};
  };
}

ScalarField plate_load()
{
  return [](double x, double y) {
    const auto g = bump(x), h = bump(y);
    return g[4] * h[0] + 2.0 * g[2] * h[2] + g[0] * h[4];
  };
}

std::array<ScalarField, 3> stokes_solution()
{
  const ScalarField u1 = [](double x, double y) { return bump(x)[0] * bump(y)[1]; };
  const ScalarField u2 = [](double x, double y) { return -bump(x)[1] * bump(y)[0]; };
  const ScalarField p = [](double x, double y) {
    return x * x * x + y * y * y - 0.5;
  };
  return {u1, u2, p};
}

std::array<ScalarField, 2> stokes_load()
{
  const ScalarField f1 = [](double x, double y) {
    const auto g = bump(x), h = bump(y);
    return -(g[2] * h[1] + g[0] * h[3]) + 3.0 * x * x;
  };
  const ScalarField f2 = [](double x, double y) {
    const auto g = bump(x), h = bump(y);
    return (g[3] * h[0] + g[1] * h[2]) + 3.0 * y * y;
  };
  return {f1, f2};
}

std::vector<ConvergenceRow> biharmonic_sweep(const std::string& element_name,
                                             int degree, const std::vector<int>& Ns,
                                             double nu, double perturb,
                                             std::uint64_t seed)
{
  const MacroElement reference =
      make_element(element_name, degree, reference_simplex_vertices(2));
  const ScalarField f = plate_load();
  const ScalarSolution exact = plate_solution();
  std::vector<ConvergenceRow> rows;
  for (int N : Ns) {
    const Mesh mesh = structured_mesh(N, perturb, seed);
    const LinearSystem sys = assemble_biharmonic(mesh, reference, nu, f);
    const Vec x = solve_direct(sys);
    ConvergenceRow row;
    row.n = N;
    row.dofs = static_cast<int>(sys.matrix.rows()) - sys.nconstraints;
    row.errors = error_norms(mesh, reference, x, exact);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConvergenceRow> stokes_sweep(const std::vector<int>& Ns, double perturb,
                                         std::uint64_t seed)
{
  const auto sol = stokes_solution();
  const MacroElement vref = make_element("lagrange", 2, reference_simplex_vertices(2));
  std::vector<ConvergenceRow> rows;
  for (int N : Ns) {
    const Mesh mesh = structured_mesh(N, perturb, seed);
    const LinearSystem sys = assemble_stokes_sv(mesh);
    const Vec x = solve_direct(sys);
    const auto [verr, perr] = stokes_error_norms(mesh, x, sol[0], sol[1], sol[2]);
    const DofMap vdm = build_dofmap(mesh, vref);
    ConvergenceRow row;
    row.n = N;
    row.dofs = static_cast<int>(sys.matrix.rows()) - sys.nconstraints;
    row.errors = {verr, perr, div_norm(mesh, vref, x.head(2 * vdm.total))};
    rows.push_back(row);
  }
  return rows;
}

}  // namespace macrotab
