#include "macrotab/cellcomplex.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace macrotab {

namespace {

void combinations_rec(const std::vector<int>& items, int k, std::size_t start,
                      std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < items.size(); ++i) {
    cur.push_back(items[i]);
    combinations_rec(items, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> combinations(const std::vector<int>& items, int k)
{
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  combinations_rec(items, k, 0, cur, out);
  return out;
}

}  // namespace

Mat SimplicialComplex::entity_coords(int d, int i) const
{
  const auto& verts = topology[d][i];
  Mat out(static_cast<int>(verts.size()), dim);
  for (std::size_t k = 0; k < verts.size(); ++k) out.row(static_cast<int>(k)) = vertices.row(verts[k]);
  return out;
}

int SimplicialComplex::entity_id(int d, std::vector<int> verts) const
{
  std::sort(verts.begin(), verts.end());
  const auto& ents = topology[d];
  auto it = std::lower_bound(ents.begin(), ents.end(), verts);
  if (it != ents.end() && *it == verts) return static_cast<int>(it - ents.begin());
  return -1;
}

std::vector<int> SimplicialComplex::sub_entities(int d, int i, int dsub) const
{
  std::vector<int> out;
  for (const auto& sub : combinations(topology[d][i], dsub + 1)) {
    const int id = entity_id(dsub, sub);
    if (id < 0) throw std::runtime_error("sub_entities: missing entity");
    out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> SimplicialComplex::super_entities(int d, int dsub, int isub) const
{
  const auto& sub = topology[dsub][isub];
  std::vector<int> out;
  for (int i = 0; i < num_entities(d); ++i) {
    const auto& sup = topology[d][i];
    if (std::includes(sup.begin(), sup.end(), sub.begin(), sub.end())) out.push_back(i);
  }
  return out;
}

Vec SimplicialComplex::barycentric(int cell, const Vec& x) const
{
  const auto& verts = topology[dim][cell];
  Mat E(dim, dim);
  const Vec v0 = vertices.row(verts[0]).transpose();
  for (int j = 0; j < dim; ++j) E.col(j) = vertices.row(verts[j + 1]).transpose() - v0;
  const Vec rest = E.partialPivLu().solve(x - v0);
  Vec lam(dim + 1);
  lam[0] = 1.0 - rest.sum();
  lam.tail(dim) = rest;
  return lam;
}

bool SimplicialComplex::entity_contains(int d, int i, const Vec& x, double tol) const
{
  const Mat coords = entity_coords(d, i);
  if (d == 0) return (coords.row(0).transpose() - x).norm() <= tol;
  // Affine coordinates by least squares; for d == dim the residual is zero.
  Mat E(dim, d);
  const Vec v0 = coords.row(0).transpose();
  for (int j = 0; j < d; ++j) E.col(j) = coords.row(j + 1).transpose() - v0;
  const Vec rest = E.colPivHouseholderQr().solve(x - v0);
  if ((E * rest - (x - v0)).norm() > tol) return false;
  if (rest.minCoeff() < -tol) return false;
  return 1.0 - rest.sum() >= -tol;
}

std::vector<int> SimplicialComplex::cells_containing(const Vec& x, double tol) const
{
  std::vector<int> out;
  for (int i = 0; i < num_cells(); ++i) {
    Vec lam = barycentric(i, x);
    if (lam.minCoeff() >= -tol) out.push_back(i);
  }
  return out;
}

double SimplicialComplex::cell_volume(int i) const
{
  const auto& verts = topology[dim][i];
  Mat E(dim, dim);
  const Vec v0 = vertices.row(verts[0]).transpose();
  for (int j = 0; j < dim; ++j) E.col(j) = vertices.row(verts[j + 1]).transpose() - v0;
  double fact = 1.0;
  for (int k = 2; k <= dim; ++k) fact *= k;
  return std::abs(E.determinant()) / fact;
}

SimplicialComplex build_complex(const Mat& vertices,
                                const std::vector<std::vector<int>>& cells, int dim)
{
  SimplicialComplex c;
  c.dim = dim;
  c.vertices = vertices;
  c.topology.resize(dim + 1);
  c.topology[0].resize(vertices.rows());
  for (int v = 0; v < vertices.rows(); ++v) c.topology[0][v] = {v};
  for (int d = 1; d <= dim; ++d) {
    std::set<std::vector<int>> ents;
    for (const auto& cell : cells) {
      if (static_cast<int>(cell.size()) != dim + 1)
        throw std::runtime_error("build_complex: cell has wrong vertex count");
      std::vector<int> sorted = cell;
      std::sort(sorted.begin(), sorted.end());
      for (auto& sub : combinations(sorted, d + 1)) ents.insert(sub);
    }
    c.topology[d].assign(ents.begin(), ents.end());
  }
  return c;
}

Mat reference_simplex_vertices(int d)
{
  if (d < 1 || d > 3) throw std::runtime_error("reference_simplex: unsupported dimension");
  Mat verts = Mat::Zero(d + 1, d);
  for (int j = 0; j < d; ++j) verts(j + 1, j) = 1.0;
  return verts;
}

SimplicialComplex reference_simplex(int d)
{
  std::vector<int> cell(d + 1);
  for (int j = 0; j <= d; ++j) cell[j] = j;
  return build_complex(reference_simplex_vertices(d), {cell}, d);
}

namespace {

SplitSimplicialComplex finish_split(SplitKind kind, int param, const Mat& cell_verts,
                                    const Mat& child_verts,
                                    const std::vector<std::vector<int>>& child_cells)
{
  const int dim = static_cast<int>(cell_verts.cols());
  if (cell_verts.rows() != dim + 1) throw std::runtime_error("split: need d+1 cell vertices");
  SplitSimplicialComplex s;
  s.kind = kind;
  s.param = param;
  std::vector<int> pcell(dim + 1);
  for (int j = 0; j <= dim; ++j) pcell[j] = j;
  s.parent = build_complex(cell_verts, {pcell}, dim);
  s.child = build_complex(child_verts, child_cells, dim);
  s.parent_entity.resize(dim + 1);
  for (int d = 0; d <= dim; ++d) {
    s.parent_entity[d].resize(s.child.num_entities(d));
    for (int i = 0; i < s.child.num_entities(d); ++i) {
      const Mat coords = s.child.entity_coords(d, i);
      std::pair<int, int> owner(dim, 0);
      bool found = false;
      for (int pd = 0; pd <= dim && !found; ++pd) {
        for (int pid = 0; pid < s.parent.num_entities(pd) && !found; ++pid) {
          bool inside = true;
          for (int r = 0; r < coords.rows() && inside; ++r)
            inside = s.parent.entity_contains(pd, pid, coords.row(r).transpose());
          if (inside) {
            owner = {pd, pid};
            found = true;
          }
        }
      }
      s.parent_entity[d][i] = owner;
    }
  }
  return s;
}

}  // namespace

SplitSimplicialComplex no_split(const Mat& cell_verts)
{
  const int dim = static_cast<int>(cell_verts.cols());
  std::vector<int> cell(dim + 1);
  for (int j = 0; j <= dim; ++j) cell[j] = j;
  return finish_split(SplitKind::None, 0, cell_verts, cell_verts, {cell});
}

SplitSimplicialComplex alfeld_split(const Mat& cell_verts)
{
  const int dim = static_cast<int>(cell_verts.cols());
  const int nb = dim + 1;
  Mat verts(nb + 1, dim);
  verts.topRows(nb) = cell_verts;
  verts.row(nb) = cell_verts.colwise().mean();
  std::vector<std::vector<int>> cells;
  for (int skip = 0; skip < nb; ++skip) {
    std::vector<int> cell;
    for (int j = 0; j < nb; ++j)
      if (j != skip) cell.push_back(j);
    cell.push_back(nb);
    cells.push_back(cell);
  }
  return finish_split(SplitKind::Alfeld, 0, cell_verts, verts, cells);
}

SplitSimplicialComplex iso_split(const Mat& cell_verts, int ell)
{
  const int dim = static_cast<int>(cell_verts.cols());
  if (ell < 1) throw std::runtime_error("iso_split: level must be positive");
  if (dim == 1) {
    Mat verts(ell + 1, 1);
    std::vector<int> id_of(ell + 1);
    verts.row(0) = cell_verts.row(0);
    verts.row(1) = cell_verts.row(1);
    id_of[0] = 0;
    id_of[ell] = 1;
    int next = 2;
    for (int i = 1; i < ell; ++i) {
      const double t = static_cast<double>(i) / ell;
      verts.row(next) = (1 - t) * cell_verts.row(0) + t * cell_verts.row(1);
      id_of[i] = next++;
    }
    std::vector<std::vector<int>> cells;
    for (int i = 0; i < ell; ++i) cells.push_back({id_of[i], id_of[i + 1]});
    return finish_split(SplitKind::Iso, ell, cell_verts, verts.topRows(next), cells);
  }
  if (dim != 2) throw std::runtime_error("iso_split: unsupported dimension");
  const int npts = (ell + 1) * (ell + 2) / 2;
  Mat verts(npts, 2);
  std::vector<std::vector<int>> id_of(ell + 1, std::vector<int>(ell + 1, -1));
  verts.row(0) = cell_verts.row(0);
  verts.row(1) = cell_verts.row(1);
  verts.row(2) = cell_verts.row(2);
  id_of[0][0] = 0;
  id_of[ell][0] = 1;
  id_of[0][ell] = 2;
  int next = 3;
  for (int j = 0; j <= ell; ++j)
    for (int i = 0; i + j <= ell; ++i) {
      if (id_of[i][j] >= 0) continue;
      verts.row(next) = cell_verts.row(0) +
                        (static_cast<double>(i) / ell) * (cell_verts.row(1) - cell_verts.row(0)) +
                        (static_cast<double>(j) / ell) * (cell_verts.row(2) - cell_verts.row(0));
      id_of[i][j] = next++;
    }
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < ell; ++j)
    for (int i = 0; i + j < ell; ++i) {
      cells.push_back({id_of[i][j], id_of[i + 1][j], id_of[i][j + 1]});
      if (i + j < ell - 1)
        cells.push_back({id_of[i + 1][j], id_of[i + 1][j + 1], id_of[i][j + 1]});
    }
  return finish_split(SplitKind::Iso, ell, cell_verts, verts, cells);
}

SplitSimplicialComplex powell_sabin_split(const Mat& cell_verts, int variant)
{
  if (cell_verts.cols() != 2) throw std::runtime_error("powell_sabin_split: triangles only");
  const Eigen::RowVector2d v0 = cell_verts.row(0), v1 = cell_verts.row(1), v2 = cell_verts.row(2);
  const Eigen::RowVector2d m01 = 0.5 * (v0 + v1), m02 = 0.5 * (v0 + v2), m12 = 0.5 * (v1 + v2);
  const Eigen::RowVector2d g = (v0 + v1 + v2) / 3.0;
  if (variant == 6) {
    Mat verts(7, 2);
    verts << v0, v1, v2, m01, m02, m12, g;
    const std::vector<std::vector<int>> cells = {{6, 0, 3}, {6, 3, 1}, {6, 1, 5},
                                                 {6, 5, 2}, {6, 2, 4}, {6, 4, 0}};
    return finish_split(SplitKind::PowellSabin6, 0, cell_verts, verts, cells);
  }
  if (variant == 12) {
    // Medians cross the midlines at the midline midpoints p0, p1, p2.
    const Eigen::RowVector2d p0 = 0.5 * (m01 + m02), p1 = 0.5 * (m01 + m12),
                             p2 = 0.5 * (m02 + m12);
    Mat verts(10, 2);
    verts << v0, v1, v2, m01, m02, m12, p0, p1, p2, g;
    const std::vector<std::vector<int>> cells = {
        {0, 3, 6}, {0, 6, 4}, {1, 3, 7}, {1, 7, 5}, {2, 4, 8}, {2, 8, 5},
        {3, 6, 9}, {6, 4, 9}, {4, 8, 9}, {8, 5, 9}, {5, 7, 9}, {7, 3, 9}};
    return finish_split(SplitKind::PowellSabin12, 0, cell_verts, verts, cells);
  }
  throw std::runtime_error("powell_sabin_split: variant must be 6 or 12");
}

bool is_refinement_of(const SimplicialComplex& fine, const SimplicialComplex& coarse,
                      double tol)
{
  if (fine.dim != coarse.dim) return false;
  for (int i = 0; i < fine.num_cells(); ++i) {
    const Mat coords = fine.entity_coords(fine.dim, i);
    bool covered = false;
    for (int j = 0; j < coarse.num_cells() && !covered; ++j) {
      bool inside = true;
      for (int r = 0; r < coords.rows() && inside; ++r) {
        Vec lam = coarse.barycentric(j, coords.row(r).transpose());
        inside = lam.minCoeff() >= -tol;
      }
      covered = inside;
    }
    if (!covered) return false;
  }
  return true;
}

FacetFrame facet_frame(const SimplicialComplex& c, int edge_id)
{
  if (c.dim != 2) throw std::runtime_error("facet_frame: 2D complexes only");
  const auto& ev = c.topology[1][edge_id];
  FacetFrame f;
  f.a = c.vertices.row(ev[0]).transpose();
  f.b = c.vertices.row(ev[1]).transpose();
  f.length = (f.b - f.a).norm();
  f.tangent = (f.b - f.a) / f.length;
  f.normal = Vec2(f.tangent.y(), -f.tangent.x());
  const auto cells = c.super_entities(2, 1, edge_id);
  if (cells.size() == 1) {
    // Boundary facet: orient the normal out of the incident cell.
    const Mat cc = c.entity_coords(2, cells[0]);
    const Vec2 centroid = cc.colwise().mean().transpose();
    const Vec2 mid = 0.5 * (f.a + f.b);
    if (f.normal.dot(mid - centroid) < 0) f.normal = -f.normal;
  }
  return f;
}

std::vector<FacetFrame> facet_frames(const SimplicialComplex& c)
{
  std::vector<FacetFrame> out;
  out.reserve(c.num_entities(1));
  for (int e = 0; e < c.num_entities(1); ++e) out.push_back(facet_frame(c, e));
  return out;
}

}  // namespace macrotab
