#include "macrotab/expansion.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace macrotab {

namespace {

constexpr double kGlueTol = 1e-9;

}  // namespace

std::vector<int> ExpansionSet::owners(const Mat& pts) const
{
  const int np = static_cast<int>(pts.rows());
  std::vector<int> owner(np, -1);
  for (int q = 0; q < np; ++q) {
    const auto cells = complex->child.cells_containing(pts.row(q).transpose());
    if (cells.empty()) throw std::runtime_error("ExpansionSet: point outside macrocell");
    owner[q] = cells.front();
  }
  return owner;
}

TabulatedValues ExpansionSet::tabulate_frame(const Mat& pts, int max_deriv,
                                             const std::vector<int>* owner) const
{
  const int d = complex->dim();
  const int np = static_cast<int>(pts.rows());
  const int nsub = complex->num_subcells();
  std::vector<int> own = owner ? *owner : owners(pts);

  TabulatedValues tab;
  tab.dim = d;
  tab.max_deriv = max_deriv;
  tab.ncomp = 1;
  tab.derivs = deriv_list(d, max_deriv);
  tab.data.assign(tab.derivs.size(), Mat::Zero(frame_size(), np));

  for (int t = 0; t < nsub; ++t) {
    std::vector<int> idx;
    for (int q = 0; q < np; ++q)
      if (own[q] == t) idx.push_back(q);
    if (idx.empty()) continue;

    Mat ref(idx.size(), d);
    for (size_t r = 0; r < idx.size(); ++r)
      ref.row(r) = (einv[t] * (pts.row(idx[r]).transpose() - origin[t])).transpose();
    const TabulatedValues loc = dubiner_tabulate(d, degree, ref, max_deriv);
    const Mat& A = einv[t];
    const double s = scale[t];

    for (size_t r = 0; r < idx.size(); ++r) {
      const int q = idx[r];
      for (int i = 0; i < block; ++i) {
        const int row = t * block + i;
        tab.data[0](row, q) = s * loc.data[0](i, r);
        if (max_deriv >= 1) {
          if (d == 1) {
            tab.data[1](row, q) = s * loc.data[1](i, r) * A(0, 0);
          } else {
            const double gx = loc.data[1](i, r), gy = loc.data[2](i, r);
            tab.data[1](row, q) = s * (gx * A(0, 0) + gy * A(1, 0));
            tab.data[2](row, q) = s * (gx * A(0, 1) + gy * A(1, 1));
          }
        }
        if (max_deriv >= 2) {
          if (d == 1) {
            tab.data[2](row, q) = s * loc.data[2](i, r) * A(0, 0) * A(0, 0);
          } else {
            Mat2 H;
            H << loc.data[3](i, r), loc.data[4](i, r), loc.data[4](i, r), loc.data[5](i, r);
            const Mat2 Hx = A.transpose() * H * A;
            tab.data[3](row, q) = s * Hx(0, 0);
            tab.data[4](row, q) = s * Hx(0, 1);
            tab.data[5](row, q) = s * Hx(1, 1);
          }
        }
      }
    }
  }
  return tab;
}

TabulatedValues ExpansionSet::tabulate(const Mat& pts, int max_deriv,
                                       const std::vector<int>* owner) const
{
  TabulatedValues tab = tabulate_frame(pts, max_deriv, owner);
  if (ncomp == 1) {
    for (auto& m : tab.data) m = (coeff * m).eval();
    return tab;
  }
  tab.ncomp = ncomp;
  const int np = static_cast<int>(pts.rows());
  for (auto& m : tab.data) {
    Mat out = Mat::Zero(nloc(), np * ncomp);
    for (int c = 0; c < ncomp; ++c) {
      Mat slice(nloc(), frame_size());
      for (int f = 0; f < frame_size(); ++f) slice.col(f) = coeff.col(f * ncomp + c);
      const Mat vals = slice * m;
      for (int q = 0; q < np; ++q) out.col(q * ncomp + c) = vals.col(q);
    }
    m = out;
  }
  return tab;
}

ExpansionSet macro_expansion(std::shared_ptr<const SplitSimplicialComplex> complex,
                             int degree, Continuity continuity)
{
  const int d = complex->dim();
  ExpansionSet set;
  set.complex = complex;
  set.degree = degree;
  set.continuity = continuity;
  set.block = dubiner_size(d, degree);

  const int nsub = complex->num_subcells();
  for (int t = 0; t < nsub; ++t) {
    const Mat verts = complex->child.entity_coords(d, t);
    Mat E(d, d);
    for (int j = 0; j < d; ++j) E.col(j) = (verts.row(j + 1) - verts.row(0)).transpose();
    set.origin.push_back(verts.row(0).transpose());
    set.emap.push_back(E);
    set.einv.push_back(E.inverse());
    set.scale.push_back(1.0 / std::sqrt(std::abs(E.determinant())));
  }

  if (continuity == Continuity::DG) {
    set.coeff = Mat::Identity(set.block * nsub, set.block * nsub);
    return set;
  }
  if (continuity != Continuity::C0)
    throw std::runtime_error("macro_expansion: constrained sets need a constraint matrix");

  // Glue per-subcell Lagrange lattices by point identity.
  std::vector<Vec> nodes;
  std::vector<std::vector<int>> global(nsub);
  for (int t = 0; t < nsub; ++t) {
    const Mat verts = complex->child.entity_coords(d, t);
    const Mat lat = simplex_lattice(verts, degree);
    for (int j = 0; j < lat.rows(); ++j) {
      const Vec p = lat.row(j).transpose();
      int id = -1;
      for (size_t g = 0; g < nodes.size(); ++g)
        if ((nodes[g] - p).norm() < kGlueTol) {
          id = static_cast<int>(g);
          break;
        }
      if (id < 0) {
        id = static_cast<int>(nodes.size());
        nodes.push_back(p);
      }
      global[t].push_back(id);
    }
  }

  set.nodes.resize(nodes.size(), d);
  for (size_t g = 0; g < nodes.size(); ++g) set.nodes.row(g) = nodes[g].transpose();

  set.coeff = Mat::Zero(nodes.size(), set.block * nsub);
  for (int t = 0; t < nsub; ++t) {
    Mat lat(global[t].size(), d);
    for (size_t j = 0; j < global[t].size(); ++j)
      lat.row(j) = nodes[global[t][j]].transpose();
    ExpansionSet probe = set;
    probe.coeff = Mat::Identity(set.block * nsub, set.block * nsub);
    std::vector<int> own(lat.rows(), t);
    const Mat V = probe.tabulate_frame(lat, 0, &own).data[0]
                      .middleRows(t * set.block, set.block)
                      .transpose();  // node x frame
    const Mat C = V.inverse().transpose();
    for (size_t j = 0; j < global[t].size(); ++j)
      set.coeff.block(global[t][j], t * set.block, 1, set.block) =
          C.row(static_cast<int>(j));
  }
  return set;
}

ExpansionSet vector_expansion(const ExpansionSet& base, int ncomp)
{
  if (base.ncomp != 1)
    throw std::runtime_error("vector_expansion: base set must be scalar");
  ExpansionSet set = base;
  set.ncomp = ncomp;
  set.coeff = Mat::Zero(base.nloc() * ncomp, base.frame_size() * ncomp);
  for (int j = 0; j < base.nloc(); ++j)
    for (int c = 0; c < ncomp; ++c)
      for (int f = 0; f < base.frame_size(); ++f)
        set.coeff(j * ncomp + c, f * ncomp + c) = base.coeff(j, f);
  return set;
}

ExpansionSet constrained_expansion(const ExpansionSet& base, const Mat& constraint,
                                   double cutoff)
{
  if (constraint.cols() != base.nloc())
    throw std::runtime_error("constrained_expansion: constraint column count mismatch");
  Eigen::JacobiSVD<Mat> svd(constraint, Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff * smax) ++rank;
  const Mat null_basis = svd.matrixV().rightCols(base.nloc() - rank);

  ExpansionSet set = base;
  set.continuity = Continuity::Constrained;
  set.coeff = null_basis.transpose() * base.coeff;
  return set;
}

}  // namespace macrotab
