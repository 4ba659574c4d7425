#include "macrotab/dualset.hpp"
#include "macrotab/quadrature.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

using namespace macrotab;

namespace {

std::shared_ptr<const SplitSimplicialComplex> alfeld_ref()
{
  return std::make_shared<SplitSimplicialComplex>(
      alfeld_split(reference_simplex_vertices(2)));
}

PointFunction poly_xy()
{
  // f = x^2 y + 3 x with all partials through order 2.
  return [](const Vec& p, const Deriv& d, int) {
    const double x = p(0), y = p(1);
    if (d == Deriv{0, 0, 0}) return x * x * y + 3 * x;
    if (d == Deriv{1, 0, 0}) return 2 * x * y + 3;
    if (d == Deriv{0, 1, 0}) return x * x;
    if (d == Deriv{2, 0, 0}) return 2 * y;
    if (d == Deriv{1, 1, 0}) return 2 * x;
    return 0.0;
  };
}

}  // namespace

TEST_CASE("point functionals sample values and derivatives")
{
  Vec p(2);
  p << 0.3, 0.4;
  CHECK(evaluate(point_eval(p), poly_xy()) == Catch::Approx(0.3 * 0.3 * 0.4 + 0.9));
  CHECK(evaluate(point_deriv(p, {0, 1, 0}), poly_xy()) == Catch::Approx(0.09));
  Vec dir(2);
  dir << 2, -1;
  CHECK(evaluate(directional_deriv(p, dir), poly_xy()) ==
        Catch::Approx(2 * (2 * 0.3 * 0.4 + 3) - 0.09));
}

TEST_CASE("moments integrate weighted combinations of derivatives")
{
  auto split = alfeld_ref();
  const QuadratureRule rule = macro_rule(*split, 6);
  // L(f) = integral of df/dx over the macrocell, f = x^2 y + 3x:
  // integral of (2xy + 3) over the unit triangle = 2/24 + 3/2.
  const Mat g = Mat::Ones(rule.size(), 1);
  const Functional L =
      moment(rule.points, rule.weights, {{Deriv{1, 0, 0}, 0}}, g);
  CHECK(evaluate(L, poly_xy()) == Catch::Approx(2.0 / 24 + 1.5).epsilon(1e-12));
}

TEST_CASE("vandermonde rows agree with analytic application")
{
  auto split = alfeld_ref();
  const ExpansionSet set = macro_expansion(split, 2, Continuity::C0);

  std::vector<Functional> Ls;
  Vec a(2), b(2);
  a << 0.25, 0.25;
  b << 0.5, 0.25;
  Ls.push_back(point_eval(a));
  Ls.push_back(point_deriv(b, {1, 0, 0}));
  const Mat V = vandermonde(Ls, set);

  const Mat pts = (Mat(2, 2) << 0.25, 0.25, 0.5, 0.25).finished();
  const TabulatedValues tab = set.tabulate(pts, 1);
  CHECK((V.row(0).transpose() - tab.data[0].col(0)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((V.row(1).transpose() - tab.data[1].col(1)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("nodal inversion produces a dual basis")
{
  auto split = alfeld_ref();
  const ExpansionSet set = macro_expansion(split, 1, Continuity::C0);
  REQUIRE(set.nloc() == 4);

  std::vector<Functional> Ls;
  const Mat verts = split->parent.vertices;
  for (int v = 0; v < 3; ++v) Ls.push_back(point_eval(verts.row(v).transpose()));
  Vec g(2);
  g << 1.0 / 3, 1.0 / 3;
  Ls.push_back(point_eval(g));

  const Mat V = vandermonde(Ls, set);
  const Mat A = invert_vandermonde(V);
  const Mat check = vandermonde(Ls, set) * A.transpose();
  CHECK((check - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate duals are rejected with a culprit index")
{
  auto split = alfeld_ref();
  const ExpansionSet set = macro_expansion(split, 1, Continuity::C0);
  std::vector<Functional> Ls;
  const Mat verts = split->parent.vertices;
  for (int v = 0; v < 3; ++v) Ls.push_back(point_eval(verts.row(v).transpose()));
  Ls.push_back(point_eval(verts.row(2).transpose()));  // duplicate
  CHECK_THROWS_WITH(invert_vandermonde(vandermonde(Ls, set)),
                    Catch::Matchers::ContainsSubstring("not unisolvent"));
}

TEST_CASE("vector members interleave components")
{
  auto split = alfeld_ref();
  const ExpansionSet scalar = macro_expansion(split, 1, Continuity::DG);
  const ExpansionSet vec = vector_expansion(scalar, 3);
  REQUIRE(vec.nloc() == 27);

  Mat pt(1, 2);
  pt << 0.21, 0.17;
  const TabulatedValues sv = scalar.tabulate(pt, 1);
  const TabulatedValues vv = vec.tabulate(pt, 1);
  for (int j = 0; j < scalar.nloc(); ++j)
    for (int c = 0; c < 3; ++c)
      for (int other = 0; other < 3; ++other) {
        const double expect = (other == c) ? sv.data[1](j, 0) : 0.0;
        CHECK(vv.data[1](j * 3 + c, other) == Catch::Approx(expect).margin(1e-14));
      }

  // A point functional on component 2 sees only that component.
  const Mat V = vandermonde({point_eval(pt.row(0).transpose(), 2)}, vec);
  for (int j = 0; j < scalar.nloc(); ++j) {
    CHECK(V(0, j * 3 + 2) == Catch::Approx(sv.data[0](j, 0)).margin(1e-14));
    CHECK(V(0, j * 3) == Catch::Approx(0.0).margin(1e-14));
  }
}
