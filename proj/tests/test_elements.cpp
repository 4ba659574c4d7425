#include "macrotab/elements.hpp"
#include "macrotab/quadrature.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace macrotab;

namespace {

Mat ref_verts() { return reference_simplex_vertices(2); }

Mat skew_verts()
{
  Mat v(3, 2);
  v << 0.2, -0.1, 1.3, 0.4, 0.5, 1.1;
  return v;
}

// Dense bivariate polynomial with analytic partials.
struct Poly2 {
  Mat c;  // c(a, b) multiplies x^a y^b

  double operator()(double x, double y, int dx, int dy) const
  {
    double acc = 0;
    for (int a = dx; a < c.rows(); ++a)
      for (int b = dy; b < c.cols(); ++b) {
        if (c(a, b) == 0) continue;
        double f = c(a, b);
        for (int r = 0; r < dx; ++r) f *= a - r;
        for (int r = 0; r < dy; ++r) f *= b - r;
        acc += f * std::pow(x, a - dx) * std::pow(y, b - dy);
      }
    return acc;
  }
};

PointFunction poly_fn(const std::vector<Poly2>& comps)
{
  return [comps](const Vec& p, const Deriv& d, int comp) {
    return comps[comp](p(0), p(1), d[0], d[1]);
  };
}

std::vector<Poly2> random_polys(int degree, int ncomp, unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<Poly2> out(ncomp);
  for (auto& p : out) {
    p.c = Mat::Zero(degree + 1, degree + 1);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) p.c(a, b) = U(rng);
  }
  return out;
}

Mat random_interior_points(const Mat& verts, int n, unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  Mat pts(n, 2);
  for (int i = 0; i < n; ++i) {
    double l0 = U(rng), l1 = U(rng);
    if (l0 + l1 > 0.95) {
      l0 = 0.95 - l0;
      l1 = 0.95 - l1;
    }
    pts.row(i) = (1 - l0 - l1) * verts.row(0) + l0 * verts.row(1) + l1 * verts.row(2);
  }
  return pts;
}

double max_interior_jump(const MacroElement& el, int max_deriv)
{
  const SimplicialComplex& child = el.complex->child;
  double worst = 0;
  for (int e = 0; e < child.num_entities(1); ++e) {
    const auto cells = child.super_entities(2, 1, e);
    if (cells.size() != 2) continue;
    const Mat ends = child.entity_coords(1, e);
    Mat pts(10, 2);
    for (int s = 0; s < 10; ++s) {
      const double a = (s + 0.5) / 10.0;
      pts.row(s) = (1 - a) * ends.row(0) + a * ends.row(1);
    }
    std::vector<int> own0(10, cells[0]), own1(10, cells[1]);
    const TabulatedValues t0 = el.tabulate(pts, max_deriv, &own0);
    const TabulatedValues t1 = el.tabulate(pts, max_deriv, &own1);
    for (size_t d = 0; d < t0.data.size(); ++d)
      worst = std::max(worst, (t0.data[d] - t1.data[d]).cwiseAbs().maxCoeff());
  }
  return worst;
}

// Largest tensor-normal jump of any basis function across interior facets.
double max_normal_trace_jump(const MacroElement& el)
{
  const SimplicialComplex& child = el.complex->child;
  double worst = 0;
  for (int e = 0; e < child.num_entities(1); ++e) {
    const auto cells = child.super_entities(2, 1, e);
    if (cells.size() != 2) continue;
    const FacetFrame f = facet_frame(child, e);
    Mat pts(5, 2);
    for (int s = 0; s < 5; ++s) {
      const double a = (s + 0.5) / 5.0;
      pts.row(s) = ((1 - a) * f.a + a * f.b).transpose();
    }
    std::vector<int> own0(5, cells[0]), own1(5, cells[1]);
    const Mat v0 = el.tabulate(pts, 0, &own0).data[0];
    const Mat v1 = el.tabulate(pts, 0, &own1).data[0];
    for (int j = 0; j < el.ndof(); ++j)
      for (int q = 0; q < 5; ++q) {
        const double jxx = v0(j, 3 * q) - v1(j, 3 * q);
        const double jxy = v0(j, 3 * q + 1) - v1(j, 3 * q + 1);
        const double jyy = v0(j, 3 * q + 2) - v1(j, 3 * q + 2);
        worst = std::max(worst, std::abs(jxx * f.normal(0) + jxy * f.normal(1)));
        worst = std::max(worst, std::abs(jxy * f.normal(0) + jyy * f.normal(1)));
      }
  }
  return worst;
}

double reproduction_error(const MacroElement& el, int degree, unsigned seed)
{
  const auto polys = random_polys(degree, el.ncomp, seed);
  const PointFunction f = poly_fn(polys);
  const Vec dofs = el.interpolate(f);
  const Mat pts = random_interior_points(el.complex->parent.vertices, 20, seed + 1);
  const TabulatedValues tab = el.tabulate(pts, 0);
  double worst = 0;
  for (int q = 0; q < pts.rows(); ++q)
    for (int c = 0; c < el.ncomp; ++c) {
      const double got = (dofs.transpose() * tab.data[0].col(q * el.ncomp + c))(0);
      const double want = f(pts.row(q).transpose(), {0, 0, 0}, c);
      worst = std::max(worst, std::abs(got - want));
    }
  return worst;
}

}  // namespace

TEST_CASE("catalogue dimensions")
{
  CHECK(make_powell_sabin(ref_verts(), 6).ndof() == 9);
  CHECK(make_powell_sabin(ref_verts(), 12).ndof() == 12);
  CHECK(make_hct(ref_verts(), 3, false).ndof() == 12);
  CHECK(make_hct(ref_verts(), 3, true).ndof() == 9);
  CHECK(make_hct(ref_verts(), 4, false).ndof() == 19);
  CHECK(make_johnson_mercier(ref_verts()).ndof() == 15);
  CHECK(make_alfeld_sorokina(ref_verts()).ndof() == 15);
  CHECK(make_lagrange_macro(ref_verts(), SplitKind::Alfeld, 0, 2, Continuity::C0)
            .ndof() == 10);
  CHECK(make_lagrange_macro(ref_verts(), SplitKind::Iso, 2, 1, Continuity::C0)
            .ndof() == 6);
  CHECK(make_lagrange_macro(ref_verts(), SplitKind::Alfeld, 0, 1, Continuity::DG)
            .ndof() == 9);
}

TEST_CASE("nodal duality holds on a skewed cell")
{
  for (const auto& name : {"ps6", "ps12", "hct3", "hct-red", "hct4",
                           "johnson-mercier", "alfeld-sorokina"}) {
    const MacroElement el = make_element(name, 3, skew_verts());
    const Mat V = vandermonde(el.duals, el.span);
    const Mat delta = V * el.nodal.transpose() - Mat::Identity(el.ndof(), el.ndof());
    INFO(name);
    CHECK(delta.cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("smooth elements have no interior jumps")
{
  for (const auto& name : {"ps6", "ps12", "hct3", "hct-red", "hct4"}) {
    for (const Mat& verts : {ref_verts(), skew_verts()}) {
      const MacroElement el = make_element(name, 3, verts);
      INFO(name);
      CHECK(max_interior_jump(el, 1) < 1e-8);
    }
  }
}

TEST_CASE("elements reproduce their full polynomial degree")
{
  CHECK(reproduction_error(make_powell_sabin(skew_verts(), 6), 2, 11) < 1e-9);
  CHECK(reproduction_error(make_powell_sabin(skew_verts(), 12), 2, 12) < 1e-9);
  CHECK(reproduction_error(make_hct(skew_verts(), 3, false), 3, 13) < 1e-9);
  CHECK(reproduction_error(make_hct(skew_verts(), 3, true), 2, 14) < 1e-9);
  CHECK(reproduction_error(make_hct(skew_verts(), 4, false), 4, 15) < 1e-9);
  CHECK(reproduction_error(make_johnson_mercier(skew_verts()), 1, 16) < 1e-9);
  CHECK(reproduction_error(make_alfeld_sorokina(skew_verts()), 2, 17) < 1e-9);
  CHECK(reproduction_error(
            make_lagrange_macro(skew_verts(), SplitKind::PowellSabin12, 0, 2,
                                Continuity::C0),
            2, 18) < 1e-9);
}

TEST_CASE("johnson-mercier is h(div) conforming and passes constants")
{
  const MacroElement el = make_johnson_mercier(skew_verts());
  CHECK(max_normal_trace_jump(el) < 1e-9);

  std::vector<Poly2> identity(3);
  for (int c = 0; c < 3; ++c) identity[c].c = Mat::Zero(1, 1);
  identity[0].c(0, 0) = 1;
  identity[2].c(0, 0) = 1;
  const Vec dofs = el.interpolate(poly_fn(identity));
  const Mat pts = random_interior_points(skew_verts(), 10, 5);
  const TabulatedValues tab = el.tabulate(pts, 0);
  for (int q = 0; q < pts.rows(); ++q) {
    CHECK((dofs.transpose() * tab.data[0].col(3 * q))(0) == Catch::Approx(1.0));
    CHECK(std::abs((dofs.transpose() * tab.data[0].col(3 * q + 1))(0)) < 1e-10);
    CHECK((dofs.transpose() * tab.data[0].col(3 * q + 2))(0) == Catch::Approx(1.0));
  }
}

TEST_CASE("alfeld-sorokina has continuous divergence")
{
  const MacroElement el = make_alfeld_sorokina(skew_verts());
  const SimplicialComplex& child = el.complex->child;
  double worst = 0;
  for (int e = 0; e < child.num_entities(1); ++e) {
    const auto cells = child.super_entities(2, 1, e);
    if (cells.size() != 2) continue;
    const Mat ends = child.entity_coords(1, e);
    Mat pts(5, 2);
    for (int s = 0; s < 5; ++s) {
      const double a = (s + 0.5) / 5.0;
      pts.row(s) = (1 - a) * ends.row(0) + a * ends.row(1);
    }
    std::vector<int> own0(5, cells[0]), own1(5, cells[1]);
    const TabulatedValues t0 = el.tabulate(pts, 1, &own0);
    const TabulatedValues t1 = el.tabulate(pts, 1, &own1);
    for (int j = 0; j < el.ndof(); ++j)
      for (int q = 0; q < 5; ++q) {
        const double div0 = t0.data[1](j, 2 * q) + t0.data[2](j, 2 * q + 1);
        const double div1 = t1.data[1](j, 2 * q) + t1.data[2](j, 2 * q + 1);
        worst = std::max(worst, std::abs(div0 - div1));
      }
  }
  CHECK(worst < 1e-9);

  // u = (x, -y) is divergence free and linear, so interpolation is exact.
  std::vector<Poly2> u(2);
  u[0].c = Mat::Zero(2, 2);
  u[0].c(1, 0) = 1;
  u[1].c = Mat::Zero(2, 2);
  u[1].c(0, 1) = -1;
  const Vec dofs = el.interpolate(poly_fn(u));
  const Mat pts = random_interior_points(skew_verts(), 10, 7);
  const TabulatedValues tab = el.tabulate(pts, 0);
  for (int q = 0; q < pts.rows(); ++q) {
    const double x = pts(q, 0), y = pts(q, 1);
    CHECK((dofs.transpose() * tab.data[0].col(2 * q))(0) == Catch::Approx(x));
    CHECK((dofs.transpose() * tab.data[0].col(2 * q + 1))(0) == Catch::Approx(-y));
  }
}

TEST_CASE("cost model matches the published table")
{
  CHECK(cost(make_powell_sabin(ref_verts(), 6), 6).work == 2916);
  CHECK(cost(make_powell_sabin(ref_verts(), 12), 6).work == 10368);
  CHECK(cost(make_hct(ref_verts(), 3, false), 12).work == 5184);
  CHECK(cost(make_hct(ref_verts(), 4, false), 16).work == 17328);
  const MacroElement p5 =
      make_lagrange_macro(ref_verts(), SplitKind::None, 0, 5, Continuity::C0);
  REQUIRE(p5.ndof() == 21);
  CHECK(cost(p5, 25).work == 11025);
}

TEST_CASE("assorted element details")
{
  const MacroElement hct = make_hct(ref_verts(), 3, false);
  CHECK(hct.cond_vandermonde < 1e6);

  // Vertex value basis functions hit 1 at their vertex, 0 at the others.
  Mat verts = ref_verts();
  const TabulatedValues tab = hct.tabulate(verts, 0);
  for (int v = 0; v < 3; ++v)
    for (int w = 0; w < 3; ++w)
      CHECK(tab.data[0](3 * v, w) == Catch::Approx(v == w ? 1.0 : 0.0).margin(1e-10));

  // PS6 point-value functions form a partition of unity.
  const MacroElement ps6 = make_powell_sabin(ref_verts(), 6);
  const Mat pts = random_interior_points(ref_verts(), 20, 3);
  const TabulatedValues pv = ps6.tabulate(pts, 0);
  for (int q = 0; q < pts.rows(); ++q)
    CHECK(pv.data[0](0, q) + pv.data[0](3, q) + pv.data[0](6, q) ==
          Catch::Approx(1.0).epsilon(1e-10));

  // P1 on the unsplit cell: every hat is 1/3 at the barycenter.
  const MacroElement p1 =
      make_lagrange_macro(ref_verts(), SplitKind::None, 0, 1, Continuity::C0);
  Mat bary(1, 2);
  bary << 1.0 / 3, 1.0 / 3;
  const TabulatedValues pt = p1.tabulate(bary, 0);
  for (int j = 0; j < 3; ++j)
    CHECK(pt.data[0](j, 0) == Catch::Approx(1.0 / 3).epsilon(1e-12));

  // Entity classification of the alfeld P2 lattice.
  const MacroElement lag =
      make_lagrange_macro(ref_verts(), SplitKind::Alfeld, 0, 2, Continuity::C0);
  const auto ed = lag.entity_dofs();
  for (int v = 0; v < 3; ++v) CHECK(ed[0][v].size() == 1);
  for (int e = 0; e < 3; ++e) CHECK(ed[1][e].size() == 1);
  CHECK(ed[2][0].size() == 4);

  // Edge frames are pure rotations of the tangent, never flipped outward.
  const FacetFrame f = element_edge_frame(lag.complex->parent, 1);
  CHECK(f.tangent(0) == Catch::Approx(0.0).margin(1e-14));
  CHECK(f.tangent(1) == Catch::Approx(1.0));
  CHECK(f.normal(0) == Catch::Approx(1.0));
  CHECK(f.normal(1) == Catch::Approx(0.0).margin(1e-14));
}
