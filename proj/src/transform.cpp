#include "macrotab/transform.hpp"

#include "macrotab/jacobi.hpp"

#include <cmath>
#include <stdexcept>

namespace macrotab {

namespace {

constexpr std::array<std::array<int, 2>, 3> kEdges{{{0, 1}, {0, 2}, {1, 2}}};

void edge_data(const Mat& verts, int e, double& len, Mat2& G)
{
  const Vec2 a = verts.row(kEdges[e][0]).transpose();
  const Vec2 b = verts.row(kEdges[e][1]).transpose();
  len = (b - a).norm();
  const Vec2 t = (b - a) / len;
  G.col(0) = Vec2(t(1), -t(0));
  G.col(1) = t;
}

// Change of frame for one edge's gradient moments: Ghat^T J^{-T} G with the
// [n t] column frames on both sides.
Mat2 bhat_block(const CellGeometry& g, int e)
{
  return g.ref_frames[e].transpose() * g.J.inverse().transpose() * g.frames[e];
}

void vertex_blocks(const CellGeometry& g, Mat& D, Mat& Vc, Mat& E)
{
  const Mat2 Jinvt = g.J.inverse().transpose();
  for (int v = 0; v < 3; ++v) {
    D(3 * v, 3 * v) = 1.0;
    D(3 * v + 1, 3 * v + 1) = 1.0;
    D(3 * v + 2, 3 * v + 2) = 1.0;
    Vc(3 * v, 3 * v) = 1.0;
    Vc.block(3 * v + 1, 3 * v + 1, 2, 2) = Jinvt;
    E(3 * v, 3 * v) = 1.0;
    E(3 * v + 1, 3 * v + 1) = 1.0;
    E(3 * v + 2, 3 * v + 2) = 1.0;
  }
}

// Shared builder for the C1 Alfeld-split family: per edge, m = k-2
// averaged-normal moments paired with raw tangential partners, m-1 invariant
// trace moments, and interior orthonormal moments for k >= 4.
Mat hct_family_transform(const CellGeometry& g, int k, HctFactors* factors)
{
  const int m = k - 2;
  const int ntr = m - 1;
  const int nint = k >= 4 ? dubiner_size(2, k - 4) : 0;
  const int ndof = 9 + 3 * (2 * m - 1) + nint;
  const int ncompleted = 9 + 6 * m + 3 * ntr + nint;

  const auto dual_normal = [&](int e, int i) { return 9 + e * (2 * m - 1) + i; };
  const auto dual_trace = [&](int e, int i) {
    return 9 + e * (2 * m - 1) + m + (i - 1);
  };
  const auto dual_interior = [&](int j) { return 9 + 3 * (2 * m - 1) + j; };
  const auto comp_pair = [&](int e, int i) { return 9 + 2 * m * e + 2 * i; };
  const auto comp_trace = [&](int e, int i) { return 9 + 6 * m + e * ntr + (i - 1); };
  const auto comp_interior = [&](int j) { return 9 + 6 * m + 3 * ntr + j; };

  Mat D = Mat::Zero(ncompleted, ndof);
  Mat Vc = Mat::Zero(ncompleted, ncompleted);
  Mat E = Mat::Zero(ndof, ncompleted);
  vertex_blocks(g, D, Vc, E);

  for (int e = 0; e < 3; ++e) {
    const int a = kEdges[e][0], b = kEdges[e][1];
    const Mat2 Bh = bhat_block(g, e);
    const double le = g.edge_lengths[e];
    const double lehat = g.ref_edge_lengths[e];
    for (int i = 0; i < m; ++i) {
      const int nrow = comp_pair(e, i), trow = nrow + 1;
      D(nrow, dual_normal(e, i)) = 1.0;
      if (i == 0) {
        // Fundamental theorem of calculus along the edge.
        D(trow, 3 * a) = -1.0;
        D(trow, 3 * b) = 1.0;
      } else {
        // Integration by parts against the trace moment's weight.
        D(trow, dual_trace(e, i)) = -1.0;
        D(trow, 3 * b) += jacobi(1, 1, i, 1.0);
        D(trow, 3 * a) -= jacobi(1, 1, i, -1.0);
      }
      // Averaged normal and raw tangential moments mix through the frame
      // change, each normalization carrying its own length factor.
      Vc(nrow, nrow) = Bh(0, 0);
      Vc(nrow, trow) = Bh(0, 1) / le;
      Vc(trow, nrow) = lehat * Bh(1, 0);
      Vc(trow, trow) = (lehat / le) * Bh(1, 1);
      E(dual_normal(e, i), nrow) = 1.0;
    }
    for (int i = 1; i <= ntr; ++i) {
      const int crow = comp_trace(e, i);
      D(crow, dual_trace(e, i)) = 1.0;
      Vc(crow, crow) = 1.0;  // invariant in the normalized edge coordinate
      E(dual_trace(e, i), crow) = 1.0;
    }
  }
  for (int j = 0; j < nint; ++j) {
    const int crow = comp_interior(j);
    D(crow, dual_interior(j)) = 1.0;
    Vc(crow, crow) = std::sqrt(std::abs(g.detJ));
    E(dual_interior(j), crow) = 1.0;
  }

  const Mat V = E * Vc * D;
  if (factors) {
    factors->E = E;
    factors->Vc = Vc;
    factors->D = D;
  }
  return V.transpose();
}

}  // namespace

CellGeometry geometry(const Mat& physical_vertices, const Mat& reference_vertices)
{
  if (physical_vertices.rows() != 3 || physical_vertices.cols() != 2 ||
      reference_vertices.rows() != 3 || reference_vertices.cols() != 2)
    throw std::invalid_argument("geometry: expected 3x2 vertex arrays");

  CellGeometry g;
  g.physical_vertices = physical_vertices;
  g.reference_vertices = reference_vertices;

  Mat2 A, Ahat;
  A.col(0) = (physical_vertices.row(1) - physical_vertices.row(0)).transpose();
  A.col(1) = (physical_vertices.row(2) - physical_vertices.row(0)).transpose();
  Ahat.col(0) = (reference_vertices.row(1) - reference_vertices.row(0)).transpose();
  Ahat.col(1) = (reference_vertices.row(2) - reference_vertices.row(0)).transpose();

  double scale = std::max(A.col(0).norm(), A.col(1).norm());
  scale = std::max(scale, (A.col(1) - A.col(0)).norm());
  if (std::abs(A.determinant()) < 1e-14 * scale * scale)
    throw std::invalid_argument("geometry: degenerate cell");

  g.J = Ahat * A.inverse();
  g.detJ = g.J.determinant();
  g.shift = reference_vertices.row(0).transpose() -
            g.J * physical_vertices.row(0).transpose();
  for (int e = 0; e < 3; ++e) {
    edge_data(physical_vertices, e, g.edge_lengths[e], g.frames[e]);
    edge_data(reference_vertices, e, g.ref_edge_lengths[e], g.ref_frames[e]);
  }
  return g;
}

CellGeometry geometry(const Mat& physical_vertices)
{
  Mat ref(3, 2);
  ref << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0;
  return geometry(physical_vertices, ref);
}

Mat hermite_transform(const CellGeometry& g)
{
  Mat M = Mat::Identity(9, 9);
  const Mat2 Jinv = g.J.inverse();
  for (int v = 0; v < 3; ++v) M.block(3 * v + 1, 3 * v + 1, 2, 2) = Jinv;
  return M;
}

Mat hct_transform(const CellGeometry& g, HctFactors* factors)
{
  return hct_family_transform(g, 3, factors);
}

Mat highorder_hct_transform(const CellGeometry& g, int k, HctFactors* factors)
{
  if (k < 4) throw std::invalid_argument("highorder_hct_transform: k < 4");
  return hct_family_transform(g, k, factors);
}

Mat extended_hct_transform(const CellGeometry& g, HctFactors* factors)
{
  Mat D = Mat::Zero(15, 12);
  Mat Vc = Mat::Zero(15, 15);
  Mat E = Mat::Zero(12, 15);
  vertex_blocks(g, D, Vc, E);

  for (int e = 0; e < 3; ++e) {
    const int a = kEdges[e][0], b = kEdges[e][1];
    const int nrow = 9 + 2 * e, trow = nrow + 1;
    D(nrow, 9 + e) = 1.0;
    // The raw tangential partner of the P2-weighted kill moment, reduced to
    // vertex data: on cubic edge traces it equals
    //   0.2 delta_a - 0.2 delta_b + 0.1 |e| (t.grad)_a + 0.1 |e| (t.grad)_b.
    const Vec2 t = g.frames[e].col(1);
    const double le = g.edge_lengths[e];
    D(trow, 3 * a) = 0.2;
    D(trow, 3 * b) = -0.2;
    D(trow, 3 * a + 1) = 0.1 * le * t(0);
    D(trow, 3 * a + 2) = 0.1 * le * t(1);
    D(trow, 3 * b + 1) = 0.1 * le * t(0);
    D(trow, 3 * b + 2) = 0.1 * le * t(1);
    // Both members of the pair are raw moments.
    Vc.block(nrow, nrow, 2, 2) =
        (g.ref_edge_lengths[e] / le) * bhat_block(g, e);
    E(9 + e, nrow) = 1.0;
  }

  const Mat V = E * Vc * D;
  if (factors) {
    factors->E = E;
    factors->Vc = Vc;
    factors->D = D;
  }
  return V.transpose();
}

Mat reduced_hct_transform(const CellGeometry& g, HctFactors* factors)
{
  return extended_hct_transform(g, factors).topRows(9).eval();
}

Mat piola_double_transform(const CellGeometry& g, const MacroElement& reference)
{
  if (reference.ncomp != 3)
    throw std::invalid_argument("piola_double_transform: tensor element expected");
  const SplitSimplicialComplex split = alfeld_split(g.physical_vertices);
  const std::vector<Functional> duals = johnson_mercier_duals(split);
  const int n = static_cast<int>(duals.size());
  if (n != reference.ndof())
    throw std::invalid_argument("piola_double_transform: node count mismatch");

  // sigma = A sigma_hat A^T with A = detJ * J^{-1}, written on the
  // (xx, xy, yy) component vector.
  const Mat2 A = g.detJ * g.J.inverse();
  const double a = A(0, 0), b = A(0, 1), c = A(1, 0), d = A(1, 1);
  Eigen::Matrix3d T;
  T << a * a, 2 * a * b, b * b,
       a * c, a * d + b * c, b * d,
       c * c, 2 * c * d, d * d;

  int total = 0;
  for (const auto& L : duals) total += static_cast<int>(L.terms.size());
  Mat mapped(total, 2);
  int r = 0;
  for (const auto& L : duals)
    for (const auto& t : L.terms) {
      if (deriv_order(t.deriv) != 0)
        throw std::invalid_argument("piola_double_transform: value nodes expected");
      const Vec2 p(t.point(0), t.point(1));
      mapped.row(r++) = g.map(p).transpose();
    }

  const TabulatedValues tab = reference.tabulate(mapped, 0);
  Mat W = Mat::Zero(n, n);
  r = 0;
  for (int i = 0; i < n; ++i)
    for (const auto& t : duals[i].terms) {
      for (int c2 = 0; c2 < 3; ++c2)
        W.row(i) += t.weight * T(t.comp, c2) * tab[0].col(3 * r + c2).transpose();
      ++r;
    }
  return W.inverse().transpose();
}

MacroElement oracle_rebuild(const MacroElement& reference, const Mat& physical_vertices)
{
  return make_element(reference.name, reference.degree, physical_vertices,
                      reference.complex->kind, reference.complex->param,
                      reference.span.continuity);
}

TabulatedValues pullback_tabulation(const MacroElement& reference,
                                    const CellGeometry& g, const Mat& points,
                                    int max_deriv, bool piola_double,
                                    const std::vector<int>* owner)
{
  Mat mapped(points.rows(), 2);
  for (int q = 0; q < points.rows(); ++q) {
    const Vec2 p(points(q, 0), points(q, 1));
    mapped.row(q) = g.map(p).transpose();
  }
  TabulatedValues tab = reference.tabulate(mapped, max_deriv, owner);

  const Mat2& J = g.J;
  if (max_deriv >= 1) {
    const Mat gx = tab.data[1], gy = tab.data[2];
    tab.data[1] = J(0, 0) * gx + J(1, 0) * gy;
    tab.data[2] = J(0, 1) * gx + J(1, 1) * gy;
  }
  if (max_deriv >= 2) {
    const Mat hxx = tab.data[3], hxy = tab.data[4], hyy = tab.data[5];
    tab.data[3] = J(0, 0) * J(0, 0) * hxx + 2 * J(0, 0) * J(1, 0) * hxy +
                  J(1, 0) * J(1, 0) * hyy;
    tab.data[4] = J(0, 0) * J(0, 1) * hxx +
                  (J(0, 0) * J(1, 1) + J(1, 0) * J(0, 1)) * hxy +
                  J(1, 0) * J(1, 1) * hyy;
    tab.data[5] = J(0, 1) * J(0, 1) * hxx + 2 * J(0, 1) * J(1, 1) * hxy +
                  J(1, 1) * J(1, 1) * hyy;
  }
  if (max_deriv >= 3)
    throw std::invalid_argument("pullback_tabulation: max_deriv > 2");

  if (piola_double) {
    const Mat2 A = g.detJ * g.J.inverse();
    const double a = A(0, 0), b = A(0, 1), c = A(1, 0), d = A(1, 1);
    Eigen::Matrix3d T;
    T << a * a, 2 * a * b, b * b,
         a * c, a * d + b * c, b * d,
         c * c, 2 * c * d, d * d;
    for (auto& m : tab.data) {
      Mat out = Mat::Zero(m.rows(), m.cols());
      for (int q = 0; q < points.rows(); ++q)
        for (int ci = 0; ci < 3; ++ci)
          for (int cj = 0; cj < 3; ++cj)
            out.col(3 * q + ci) += T(ci, cj) * m.col(3 * q + cj);
      m = out;
    }
  }
  return tab;
}

int TransformPlan::pullback_size() const
{
  return extended ? extended->ndof() : element.ndof();
}

Mat TransformPlan::matrix(const CellGeometry& g) const
{
  const int n = element.ndof();
  switch (element.mapping) {
    case MappingKind::Affine:
      if (element.span.continuity == Continuity::DG)
        return std::sqrt(std::abs(g.detJ)) * Mat::Identity(n, n);
      return Mat::Identity(n, n);
    case MappingKind::HermiteType:
      return hermite_transform(g);
    case MappingKind::HctType:
      if (element.name == "hct-red") return reduced_hct_transform(g);
      if (element.name == "hct-ext") return extended_hct_transform(g);
      if (element.degree >= 4) return highorder_hct_transform(g, element.degree);
      return hct_transform(g);
    case MappingKind::PiolaDouble:
      return piola_double_transform(g, element);
    case MappingKind::OracleRebuild:
      break;
  }
  throw std::invalid_argument("transform: '" + element.name +
                              "' has no fast path; rebuild on the physical cell");
}

TabulatedValues TransformPlan::tabulate(const Mat& physical_vertices,
                                        const Mat& points, int max_deriv,
                                        const std::vector<int>* owner) const
{
  if (element.mapping == MappingKind::OracleRebuild)
    return oracle_rebuild(element, physical_vertices)
        .tabulate(points, max_deriv, owner);
  const CellGeometry g =
      geometry(physical_vertices, element.complex->parent.vertices);
  const MacroElement& ref = extended ? *extended : element;
  TabulatedValues tab =
      pullback_tabulation(ref, g, points, max_deriv,
                          element.mapping == MappingKind::PiolaDouble, owner);
  const Mat M = matrix(g);
  for (auto& m : tab.data) m = (M * m).eval();
  return tab;
}

TransformPlan transform_plan(const MacroElement& reference_element)
{
  TransformPlan plan;
  plan.element = reference_element;
  if (reference_element.name == "hct-red")
    plan.extended = std::make_shared<const MacroElement>(
        make_hct_extended(reference_element.complex->parent.vertices));
  return plan;
}

}  // namespace macrotab
