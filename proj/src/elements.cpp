#include "macrotab/elements.hpp"

#include "macrotab/jacobi.hpp"
#include "macrotab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

namespace macrotab {

namespace {

int round_even(int n) { return n + (n % 2); }

double shat_of(const FacetFrame& f, const Vec& p)
{
  const Vec2 d = Vec2(p(0), p(1)) - f.a;
  return 2.0 * d.dot(f.tangent) / f.length - 1.0;
}

// Jump of a moment across an interior child facet: the same discretized
// moment read from both incident subcells, with opposite signs.
Functional facet_jump(const SimplicialComplex& child, int edge,
                      const std::vector<std::pair<Deriv, int>>& slots,
                      const std::function<double(double, int)>& gfun, int qdeg)
{
  const auto cells = child.super_entities(2, 1, edge);
  const FacetFrame frame = facet_frame(child, edge);
  const QuadratureRule rule = facet_rule(child, edge, qdeg);
  Mat g(rule.size(), slots.size());
  for (int q = 0; q < rule.size(); ++q) {
    const double shat = shat_of(frame, rule.points.row(q).transpose());
    for (size_t s = 0; s < slots.size(); ++s) g(q, s) = gfun(shat, static_cast<int>(s));
  }
  Functional L = moment(rule.points, rule.weights, slots, g, 1.0, cells[0]);
  append_scaled(L, moment(rule.points, rule.weights, slots, g, 1.0, cells[1]), -1.0);
  return L;
}

// Value-jump moments (degree <= kv) and normal-derivative-jump moments
// (degree <= kn) against Legendre weights on every interior facet.
std::vector<Functional> smoothness_jumps(const SplitSimplicialComplex& split, int kv,
                                         int kn)
{
  const SimplicialComplex& child = split.child;
  std::vector<Functional> Ls;
  const int qdeg = round_even(2 * std::max(kv + 1, kn + 2));
  for (int e = 0; e < child.num_entities(1); ++e) {
    if (child.super_entities(2, 1, e).size() != 2) continue;
    const FacetFrame frame = facet_frame(child, e);
    for (int j = 0; j <= kv; ++j)
      Ls.push_back(facet_jump(
          child, e, {{Deriv{0, 0, 0}, 0}},
          [j](double shat, int) { return jacobi(0, 0, j, shat); }, qdeg));
    const double nx = frame.normal(0), ny = frame.normal(1);
    for (int j = 0; j <= kn; ++j)
      Ls.push_back(facet_jump(
          child, e, {{Deriv{1, 0, 0}, 0}, {Deriv{0, 1, 0}, 0}},
          [j, nx, ny](double shat, int s) {
            return jacobi(0, 0, j, shat) * (s == 0 ? nx : ny);
          },
          qdeg));
  }
  return Ls;
}

// Jumps of every partial derivative of order 1..max_order at an interior
// point, between the smallest incident subcell and each other one.
std::vector<Functional> point_jumps(const SimplicialComplex& child, const Vec& p,
                                    int max_order)
{
  const auto cells = child.cells_containing(p);
  std::vector<Functional> Ls;
  for (size_t c = 1; c < cells.size(); ++c)
    for (const Deriv& d : deriv_list(2, max_order)) {
      if (deriv_order(d) == 0) continue;
      Functional L = point_deriv(p, d, 0, cells[0]);
      append_scaled(L, point_deriv(p, d, 0, cells[c]), -1.0);
      Ls.push_back(L);
    }
  return Ls;
}

void push_vertex_value_gradient_duals(MacroElement& el)
{
  const Mat& verts = el.complex->parent.vertices;
  for (int v = 0; v < 3; ++v) {
    const Vec p = verts.row(v).transpose();
    el.duals.push_back(point_eval(p));
    el.duals.push_back(point_deriv(p, {1, 0, 0}));
    el.duals.push_back(point_deriv(p, {0, 1, 0}));
    const std::string sv = std::to_string(v);
    el.dof_labels.insert(el.dof_labels.end(),
                         {"value_v" + sv, "grad_x_v" + sv, "grad_y_v" + sv});
    for (int r = 0; r < 3; ++r) {
      el.dof_entity.push_back({0, v});
      el.dof_flips.push_back(false);
    }
  }
}

// Quadrature on a parent edge assembled child edge by child edge, so
// integrands that kink at split points are still integrated exactly.
QuadratureRule composite_facet_rule(const SplitSimplicialComplex& split, int edge,
                                    int degree)
{
  std::vector<QuadratureRule> parts;
  int n = 0;
  for (int ce = 0; ce < split.child.num_entities(1); ++ce)
    if (split.parent_entity[1][ce] == std::make_pair(1, edge)) {
      parts.push_back(facet_rule(split.child, ce, degree));
      n += parts.back().size();
    }
  QuadratureRule rule;
  rule.points.resize(n, split.child.dim);
  rule.weights.resize(n);
  int at = 0;
  for (const QuadratureRule& part : parts) {
    rule.points.middleRows(at, part.size()) = part.points;
    rule.weights.segment(at, part.size()) = part.weights;
    at += part.size();
  }
  return rule;
}

// Averaged moment of the normal derivative against P_i^{(1,1)}(shat) on a
// parent edge.
Functional edge_normal_moment(const SplitSimplicialComplex& split, int edge, int i,
                              int degree)
{
  const FacetFrame frame = element_edge_frame(split.parent, edge);
  const QuadratureRule rule = composite_facet_rule(split, edge, round_even(i + degree));
  Mat g(rule.size(), 2);
  for (int q = 0; q < rule.size(); ++q) {
    const double w = jacobi(1, 1, i, shat_of(frame, rule.points.row(q).transpose()));
    g(q, 0) = w * frame.normal(0);
    g(q, 1) = w * frame.normal(1);
  }
  return moment(rule.points, rule.weights, {{Deriv{1, 0, 0}, 0}, {Deriv{0, 1, 0}, 0}},
                g, 1.0 / frame.length);
}

// Raw trace moment against d/dshat P_i^{(1,1)}, in the shat in [-1,1]
// parametrization so the functional is invariant under affine maps.
Functional edge_trace_moment(const SplitSimplicialComplex& split, int edge, int i,
                             int degree)
{
  const FacetFrame frame = element_edge_frame(split.parent, edge);
  const QuadratureRule rule =
      composite_facet_rule(split, edge, round_even(std::max(i - 1, 0) + degree));
  Mat g(rule.size(), 1);
  for (int q = 0; q < rule.size(); ++q)
    g(q, 0) = jacobi(1, 1, i, shat_of(frame, rule.points.row(q).transpose()), 1);
  return moment(rule.points, rule.weights, {{Deriv{0, 0, 0}, 0}}, g,
                2.0 / frame.length);
}

void finalize(MacroElement& el, int expected_dim)
{
  if (el.span.nloc() != expected_dim)
    throw std::runtime_error(el.name + ": span dimension " +
                             std::to_string(el.span.nloc()) + ", expected " +
                             std::to_string(expected_dim));
  if (static_cast<int>(el.duals.size()) != expected_dim)
    throw std::runtime_error(el.name + ": dual count mismatch");
  const Mat V = vandermonde(el.duals, el.span);
  el.nodal = invert_vandermonde(V, 1e12, &el.cond_vandermonde);
  if (el.dof_flips.empty()) el.dof_flips.assign(el.duals.size(), false);
}

}  // namespace

FacetFrame element_edge_frame(const SimplicialComplex& parent, int edge)
{
  const auto& ids = parent.entity(1, edge);
  FacetFrame f;
  f.a = parent.vertices.row(ids[0]).transpose();
  f.b = parent.vertices.row(ids[1]).transpose();
  f.length = (f.b - f.a).norm();
  f.tangent = (f.b - f.a) / f.length;
  f.normal = Vec2(f.tangent(1), -f.tangent(0));
  return f;
}

std::vector<std::vector<std::vector<int>>> MacroElement::entity_dofs() const
{
  std::vector<std::vector<std::vector<int>>> out(3);
  const SimplicialComplex& parent = complex->parent;
  for (int d = 0; d <= 2; ++d) out[d].resize(parent.num_entities(d));
  for (size_t i = 0; i < dof_entity.size(); ++i)
    out[dof_entity[i].first][dof_entity[i].second].push_back(static_cast<int>(i));
  return out;
}

TabulatedValues MacroElement::tabulate(const Mat& pts, int max_deriv,
                                       const std::vector<int>* owner) const
{
  TabulatedValues tab = span.tabulate(pts, max_deriv, owner);
  for (auto& m : tab.data) m = (nodal * m).eval();
  return tab;
}

Vec MacroElement::interpolate(const PointFunction& f) const
{
  return evaluate_all(duals, f);
}

CostModel cost(const MacroElement& el, int nq_ref)
{
  CostModel c;
  c.ndof = el.ndof();
  c.nq_ref = nq_ref;
  c.subcells = el.complex->num_subcells();
  c.nq = c.nq_ref * c.subcells;
  c.work = c.ndof * c.ndof * c.nq_ref * c.subcells;
  return c;
}

MacroElement make_lagrange_macro(const Mat& cell_verts, SplitKind split, int param,
                                 int degree, Continuity continuity)
{
  std::shared_ptr<const SplitSimplicialComplex> cpx;
  switch (split) {
    case SplitKind::None:
      cpx = std::make_shared<SplitSimplicialComplex>(no_split(cell_verts));
      break;
    case SplitKind::Alfeld:
      cpx = std::make_shared<SplitSimplicialComplex>(alfeld_split(cell_verts));
      break;
    case SplitKind::Iso:
      cpx = std::make_shared<SplitSimplicialComplex>(iso_split(cell_verts, param));
      break;
    case SplitKind::PowellSabin6:
      cpx = std::make_shared<SplitSimplicialComplex>(powell_sabin_split(cell_verts, 6));
      break;
    case SplitKind::PowellSabin12:
      cpx = std::make_shared<SplitSimplicialComplex>(powell_sabin_split(cell_verts, 12));
      break;
  }

  MacroElement el;
  el.name = continuity == Continuity::C0 ? "lagrange" : "lagrange-dg";
  el.degree = degree;
  el.complex = cpx;
  el.mapping = MappingKind::Affine;
  el.span = macro_expansion(cpx, degree, continuity);
  const SimplicialComplex& parent = cpx->parent;

  if (continuity == Continuity::C0) {
    for (int n = 0; n < el.span.nodes.rows(); ++n) {
      const Vec p = el.span.nodes.row(n).transpose();
      el.duals.push_back(point_eval(p));
      el.dof_labels.push_back("point_n" + std::to_string(n));
      std::pair<int, int> ent{2, 0};
      for (int v = 0; v < parent.num_vertices(); ++v)
        if ((parent.vertices.row(v).transpose() - p).norm() < 1e-10) ent = {0, v};
      if (ent.first == 2)
        for (int e = 0; e < parent.num_entities(1); ++e)
          if (parent.entity_contains(1, e, p, 1e-10)) {
            ent = {1, e};
            break;
          }
      el.dof_entity.push_back(ent);
    }
  } else {
    const QuadratureRule rule = macro_rule(*cpx, round_even(2 * degree));
    const TabulatedValues frame = el.span.tabulate_frame(rule.points, 0);
    for (int i = 0; i < el.span.nloc(); ++i) {
      Mat g = frame.data[0].row(i).transpose();
      el.duals.push_back(
          moment(rule.points, rule.weights, {{Deriv{0, 0, 0}, 0}}, g));
      el.dof_labels.push_back("moment_n" + std::to_string(i));
      el.dof_entity.push_back({2, 0});
    }
  }
  finalize(el, el.span.nloc());
  return el;
}

MacroElement make_hct(const Mat& cell_verts, int k, bool reduced)
{
  if (k < 3 || (reduced && k != 3))
    throw std::runtime_error("make_hct: unsupported parameters");
  if (reduced) {
    // Extended-element route: the 12-dim space keeps vertex data and gains
    // one kill-functional per edge forcing the edge normal derivative into
    // P1; the first 9 nodal functions form the element.
    MacroElement el = make_hct_extended(cell_verts);
    el.name = "hct-red";
    el.nodal = el.nodal.topRows(9).eval();
    el.duals.resize(9);
    el.dof_labels.resize(9);
    el.dof_entity.resize(9);
    el.dof_flips.assign(9, false);
    return el;
  }
  auto cpx = std::make_shared<SplitSimplicialComplex>(alfeld_split(cell_verts));

  MacroElement el;
  el.name = k == 3 ? "hct3" : "hct" + std::to_string(k);
  el.degree = k;
  el.complex = cpx;
  el.mapping = MappingKind::HctType;

  const ExpansionSet base = macro_expansion(cpx, k, Continuity::C0);
  std::vector<Functional> jumps = smoothness_jumps(*cpx, k, k - 1);
  if (k > 3) {
    // C^{k-1} supersmoothness at the interior vertex: point jumps of the
    // second partials, plus their tangential derivatives along each spoke up
    // to order k-3. The jump of a second partial restricted to a spoke is a
    // polynomial of degree k-2, so k-1 equispaced samples differentiate it
    // exactly.
    const Vec bary = cell_verts.colwise().mean().transpose();
    for (auto& L : point_jumps(cpx->child, bary, 2)) jumps.push_back(L);

    const SimplicialComplex& child = cpx->child;
    const int npts = k - 1;
    for (int e = 0; e < child.num_entities(1); ++e) {
      const auto cells = child.super_entities(2, 1, e);
      if (cells.size() != 2) continue;
      const Mat ends = child.entity_coords(1, e);
      const bool first = (ends.row(0).transpose() - bary).norm() < 1e-12;
      const Vec far = (first ? ends.row(1) : ends.row(0)).transpose();
      const double len = (far - bary).norm();
      const double h = len / npts;
      const Vec dir = (far - bary) / len;

      Mat T = Mat::Zero(npts, npts);  // T(j, i) = t_i^j
      for (int i = 0; i < npts; ++i)
        for (int j = 0; j < npts; ++j) T(j, i) = std::pow(i * h, j);
      for (int r = 1; r <= k - 3; ++r) {
        Vec rhs = Vec::Zero(npts);
        rhs(r) = std::tgamma(r + 1);
        const Vec w = T.partialPivLu().solve(rhs);
        for (const Deriv& d : deriv_list(2, 2)) {
          if (deriv_order(d) != 2) continue;
          Functional L;
          for (int i = 0; i < npts; ++i) {
            const Vec p = bary + (i * h) * dir;
            append_scaled(L, point_deriv(p, d, 0, cells[0]), w(i));
            append_scaled(L, point_deriv(p, d, 0, cells[1]), -w(i));
          }
          jumps.push_back(L);
        }
      }
    }
  }
  el.span = constrained_expansion(base, vandermonde(jumps, base));

  push_vertex_value_gradient_duals(el);
  for (int e = 0; e < 3; ++e) {
    const std::string se = std::to_string(e);
    for (int i = 0; i <= k - 3; ++i) {
      el.duals.push_back(edge_normal_moment(*cpx, e, i, k));
      el.dof_labels.push_back("normal_moment_" + std::to_string(i) + "_e" + se);
      el.dof_entity.push_back({1, e});
      el.dof_flips.push_back(i % 2 == 0);
    }
    for (int i = 1; i <= k - 3; ++i) {
      el.duals.push_back(edge_trace_moment(*cpx, e, i, k));
      el.dof_labels.push_back("trace_moment_" + std::to_string(i) + "_e" + se);
      el.dof_entity.push_back({1, e});
      el.dof_flips.push_back(i % 2 == 0);
    }
  }
  if (k >= 4) {
    const QuadratureRule rule = macro_rule(*cpx, round_even(k));
    const int nint = dubiner_size(2, k - 4);
    const ExpansionSet flat = macro_expansion(
        std::make_shared<SplitSimplicialComplex>(no_split(cell_verts)), k - 4,
        Continuity::DG);
    const TabulatedValues wtab = flat.tabulate(rule.points, 0);
    for (int i = 0; i < nint; ++i) {
      Mat g = wtab.data[0].row(i).transpose();
      el.duals.push_back(moment(rule.points, rule.weights, {{Deriv{0, 0, 0}, 0}}, g));
      el.dof_labels.push_back("interior_moment_" + std::to_string(i));
      el.dof_entity.push_back({2, 0});
      el.dof_flips.push_back(false);
    }
  }
  finalize(el, k == 3 ? 12 : 19);
  return el;
}

MacroElement make_hct_extended(const Mat& cell_verts)
{
  auto cpx = std::make_shared<SplitSimplicialComplex>(alfeld_split(cell_verts));

  MacroElement el;
  el.name = "hct-ext";
  el.degree = 3;
  el.complex = cpx;
  el.mapping = MappingKind::HctType;

  const ExpansionSet base = macro_expansion(cpx, 3, Continuity::C0);
  el.span = constrained_expansion(base, vandermonde(smoothness_jumps(*cpx, 3, 2), base));

  push_vertex_value_gradient_duals(el);
  for (int e = 0; e < 3; ++e) {
    const FacetFrame frame = element_edge_frame(cpx->parent, e);
    const QuadratureRule rule = facet_rule(cpx->parent, e, round_even(2 + 3));
    Mat g(rule.size(), 2);
    for (int q = 0; q < rule.size(); ++q) {
      const double w =
          jacobi(0, 0, 2, shat_of(frame, rule.points.row(q).transpose()));
      g(q, 0) = w * frame.normal(0);
      g(q, 1) = w * frame.normal(1);
    }
    el.duals.push_back(moment(rule.points, rule.weights,
                              {{Deriv{1, 0, 0}, 0}, {Deriv{0, 1, 0}, 0}}, g));
    el.dof_labels.push_back("kill_p2_normal_e" + std::to_string(e));
    el.dof_entity.push_back({1, e});
    el.dof_flips.push_back(true);
  }
  finalize(el, 12);
  return el;
}

MacroElement make_powell_sabin(const Mat& cell_verts, int variant)
{
  auto cpx = std::make_shared<SplitSimplicialComplex>(
      powell_sabin_split(cell_verts, variant));

  MacroElement el;
  el.name = variant == 6 ? "ps6" : "ps12";
  el.degree = 2;
  el.complex = cpx;
  el.mapping = variant == 6 ? MappingKind::HermiteType : MappingKind::HctType;

  const ExpansionSet base = macro_expansion(cpx, 2, Continuity::C0);
  el.span = constrained_expansion(base, vandermonde(smoothness_jumps(*cpx, 2, 1), base));

  push_vertex_value_gradient_duals(el);
  if (variant == 12)
    for (int e = 0; e < 3; ++e) {
      el.duals.push_back(edge_normal_moment(*cpx, e, 0, 2));
      el.dof_labels.push_back("normal_moment_0_e" + std::to_string(e));
      el.dof_entity.push_back({1, e});
      el.dof_flips.push_back(true);
    }
  finalize(el, variant == 6 ? 9 : 12);
  return el;
}

MacroElement make_johnson_mercier(const Mat& cell_verts)
{
  auto cpx = std::make_shared<SplitSimplicialComplex>(alfeld_split(cell_verts));

  MacroElement el;
  el.name = "johnson-mercier";
  el.degree = 1;
  el.ncomp = 3;
  el.complex = cpx;
  el.mapping = MappingKind::PiolaDouble;

  const ExpansionSet base =
      vector_expansion(macro_expansion(cpx, 1, Continuity::DG), 3);

  // H(div) conformity: the normal trace of the tensor may not jump across
  // interior facets; linear traces need moments against {1, shat}.
  const SimplicialComplex& child = cpx->child;
  std::vector<Functional> jumps;
  for (int e = 0; e < child.num_entities(1); ++e) {
    if (child.super_entities(2, 1, e).size() != 2) continue;
    const FacetFrame frame = facet_frame(child, e);
    const double nx = frame.normal(0), ny = frame.normal(1);
    for (int c = 0; c < 2; ++c)
      for (int j = 0; j < 2; ++j) {
        // Component c of the tensor-normal product: (xx, xy) or (xy, yy).
        const std::vector<std::pair<Deriv, int>> slots{
            {Deriv{0, 0, 0}, c == 0 ? 0 : 1}, {Deriv{0, 0, 0}, c == 0 ? 1 : 2}};
        jumps.push_back(facet_jump(
            child, e, slots,
            [j, nx, ny](double shat, int s) {
              return std::pow(shat, j) * (s == 0 ? nx : ny);
            },
            2));
      }
  }
  el.span = constrained_expansion(base, vandermonde(jumps, base));

  el.duals = johnson_mercier_duals(*cpx);
  for (int e = 0; e < 3; ++e)
    for (int c = 0; c < 2; ++c)
      for (int j = 0; j < 2; ++j) {
        el.dof_labels.push_back("tn_" + std::string(c == 0 ? "x" : "y") +
                                "_moment_" + std::to_string(j) + "_e" +
                                std::to_string(e));
        el.dof_entity.push_back({1, e});
        el.dof_flips.push_back(j == 0);
      }
  for (int c = 0; c < 3; ++c) {
    el.dof_labels.push_back(std::string("interior_avg_") +
                            (c == 0 ? "xx" : (c == 1 ? "xy" : "yy")));
    el.dof_entity.push_back({2, 0});
    el.dof_flips.push_back(false);
  }
  finalize(el, 15);
  return el;
}

std::vector<Functional> johnson_mercier_duals(const SplitSimplicialComplex& split)
{
  std::vector<Functional> duals;
  for (int e = 0; e < 3; ++e) {
    const FacetFrame frame = element_edge_frame(split.parent, e);
    const QuadratureRule rule = facet_rule(split.parent, e, 2);
    const double nx = frame.normal(0), ny = frame.normal(1);
    for (int c = 0; c < 2; ++c)
      for (int j = 0; j < 2; ++j) {
        Mat g(rule.size(), 2);
        for (int q = 0; q < rule.size(); ++q) {
          const double w =
              std::pow(shat_of(frame, rule.points.row(q).transpose()), j);
          g(q, 0) = w * nx;
          g(q, 1) = w * ny;
        }
        const std::vector<std::pair<Deriv, int>> slots{
            {Deriv{0, 0, 0}, c == 0 ? 0 : 1}, {Deriv{0, 0, 0}, c == 0 ? 1 : 2}};
        duals.push_back(moment(rule.points, rule.weights, slots, g));
      }
  }
  const QuadratureRule rule = macro_rule(split, 2);
  for (int c = 0; c < 3; ++c) {
    const Mat g = Mat::Ones(rule.size(), 1);
    duals.push_back(moment(rule.points, rule.weights, {{Deriv{0, 0, 0}, c}}, g));
  }
  return duals;
}

MacroElement make_alfeld_sorokina(const Mat& cell_verts)
{
  auto cpx = std::make_shared<SplitSimplicialComplex>(alfeld_split(cell_verts));

  MacroElement el;
  el.name = "alfeld-sorokina";
  el.degree = 2;
  el.ncomp = 2;
  el.complex = cpx;
  el.mapping = MappingKind::OracleRebuild;

  const ExpansionSet base =
      vector_expansion(macro_expansion(cpx, 2, Continuity::C0), 2);

  const SimplicialComplex& child = cpx->child;
  std::vector<Functional> jumps;
  for (int e = 0; e < child.num_entities(1); ++e) {
    if (child.super_entities(2, 1, e).size() != 2) continue;
    for (int j = 0; j < 2; ++j)
      jumps.push_back(facet_jump(
          child, e, {{Deriv{1, 0, 0}, 0}, {Deriv{0, 1, 0}, 1}},
          [j](double shat, int) { return std::pow(shat, j); }, 4));
  }
  el.span = constrained_expansion(base, vandermonde(jumps, base));

  const Mat& verts = cpx->parent.vertices;
  for (int v = 0; v < 3; ++v)
    for (int c = 0; c < 2; ++c) {
      el.duals.push_back(point_eval(verts.row(v).transpose(), c));
      el.dof_labels.push_back("comp_" + std::string(c == 0 ? "x" : "y") + "_v" +
                              std::to_string(v));
      el.dof_entity.push_back({0, v});
    }
  for (int e = 0; e < 3; ++e) {
    const auto& ids = cpx->parent.entity(1, e);
    const Vec mid =
        0.5 * (verts.row(ids[0]) + verts.row(ids[1])).transpose();
    for (int c = 0; c < 2; ++c) {
      el.duals.push_back(point_eval(mid, c));
      el.dof_labels.push_back("comp_" + std::string(c == 0 ? "x" : "y") + "_m" +
                              std::to_string(e));
      el.dof_entity.push_back({1, e});
    }
  }
  // Divergence at a vertex, averaged over incident subcells; the averaged
  // reads agree because the span has continuous divergence.
  for (int v = 0; v < 3; ++v) {
    const Vec p = verts.row(v).transpose();
    const auto cells = child.cells_containing(p);
    Functional L;
    for (int c : cells) {
      append_scaled(L, point_deriv(p, {1, 0, 0}, 0, c), 1.0 / cells.size());
      append_scaled(L, point_deriv(p, {0, 1, 0}, 1, c), 1.0 / cells.size());
    }
    el.duals.push_back(L);
    el.dof_labels.push_back("div_v" + std::to_string(v));
    el.dof_entity.push_back({0, v});
  }
  finalize(el, 15);
  return el;
}

MacroElement make_element(const std::string& name, int degree, const Mat& cell_verts,
                          SplitKind split, int param, Continuity continuity)
{
  if (name == "hct") return make_hct(cell_verts, degree, false);
  if (name == "hct3") return make_hct(cell_verts, 3, false);
  if (name == "hct4") return make_hct(cell_verts, 4, false);
  if (name == "hct-red" || name == "hctred") return make_hct(cell_verts, 3, true);
  if (name == "ps6") return make_powell_sabin(cell_verts, 6);
  if (name == "ps12") return make_powell_sabin(cell_verts, 12);
  if (name == "johnson-mercier" || name == "jm") return make_johnson_mercier(cell_verts);
  if (name == "alfeld-sorokina" || name == "as") return make_alfeld_sorokina(cell_verts);
  if (name == "lagrange" || name == "lagrange-dg")
    return make_lagrange_macro(cell_verts, split, param, degree,
                               name == "lagrange-dg" ? Continuity::DG : continuity);
  throw std::runtime_error("make_element: unknown element '" + name + "'");
}

}  // namespace macrotab
