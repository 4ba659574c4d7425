#include "macrotab/cellcomplex.hpp"
#include "macrotab/elements.hpp"
#include "macrotab/meshfem.hpp"
#include "macrotab/quadrature.hpp"
#include "macrotab/transform.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace macrotab;

// Bad names, variants, or flag combinations exit with code 2; numerical
// failures inside the library surface as std::runtime_error and exit with 3.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string name = "hct3";
  int degree = 0;  // 0 selects the element's natural degree
  std::string variant;
  std::string study = "biharmonic";
  std::vector<std::string> elements;
  std::vector<int> levels;
  std::string points = "0.25,0.25";
  int max_deriv = 0;
  int quad_degree = 4;
  int count = 5;
  double nu = 0.3;
  double perturb = 0.1;
  std::uint64_t seed = 2024;
  std::string out;
};

struct CatalogueEntry {
  int natural_degree;
  bool degree_free;  // caller picks the degree (lagrange families, plain hct)
};

const std::map<std::string, CatalogueEntry>& catalogue()
{
  static const std::map<std::string, CatalogueEntry> table = {
      {"ps6", {2, false}},          {"ps12", {2, false}},
      {"hct", {3, true}},           {"hct3", {3, false}},
      {"hct4", {4, false}},         {"hct-red", {3, false}},
      {"hctred", {3, false}},       {"johnson-mercier", {1, false}},
      {"jm", {1, false}},           {"alfeld-sorokina", {2, false}},
      {"as", {2, false}},           {"lagrange", {1, true}},
      {"lagrange-dg", {1, true}},
  };
  return table;
}

std::pair<SplitKind, int> parse_variant(const std::string& variant)
{
  if (variant.empty() || variant == "none") return {SplitKind::None, 0};
  if (variant == "alfeld") return {SplitKind::Alfeld, 0};
  if (variant == "iso") return {SplitKind::Iso, 2};
  if (variant == "iso3") return {SplitKind::Iso, 3};
  if (variant == "ps6") return {SplitKind::PowellSabin6, 0};
  if (variant == "ps12") return {SplitKind::PowellSabin12, 0};
  throw UsageError("unknown variant '" + variant +
                   "' (expected alfeld, iso, iso3, ps6, or ps12)");
}

// Validates name, degree, and variant against the catalogue before any
// numerics run, so misspellings fail fast as usage errors.
MacroElement resolve_element(const RunConfig& cfg)
{
  const auto it = catalogue().find(cfg.name);
  if (it == catalogue().end()) throw UsageError("unknown element '" + cfg.name + "'");
  const int degree = cfg.degree > 0 ? cfg.degree : it->second.natural_degree;
  if (!it->second.degree_free && degree != it->second.natural_degree)
    throw UsageError("element '" + cfg.name + "' has fixed degree " +
                     std::to_string(it->second.natural_degree));
  if (cfg.name == "hct" && degree != 3 && degree != 4)
    throw UsageError("hct degree must be 3 or 4");
  if (degree < 1) throw UsageError("degree must be at least 1");
  const auto [split, param] = parse_variant(cfg.variant);
  return make_element(cfg.name, degree, reference_simplex_vertices(2), split, param);
}

SplitSimplicialComplex make_split(const Mat& verts, SplitKind kind, int param)
{
  switch (kind) {
    case SplitKind::None: return no_split(verts);
    case SplitKind::Alfeld: return alfeld_split(verts);
    case SplitKind::Iso: return iso_split(verts, param);
    case SplitKind::PowellSabin6: return powell_sabin_split(verts, 6);
    case SplitKind::PowellSabin12: return powell_sabin_split(verts, 12);
  }
  throw UsageError("unknown split kind");
}

void emit(const RunConfig& cfg, const std::string& text)
{
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + cfg.out + "'");
  f << text;
}

// Fixed-width scientific notation keeps identical invocations byte-identical.
std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

Mat parse_points(const std::string& spec)
{
  std::vector<std::array<double, 2>> pts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    if (tok.empty()) continue;
    double x = 0.0, y = 0.0;
    char comma = 0;
    std::istringstream pair(tok);
    if (!(pair >> x >> comma >> y) || comma != ',')
      throw UsageError("bad point '" + tok + "' (expected x,y)");
    pts.push_back({x, y});
  }
  if (pts.empty()) throw UsageError("no points given");
  Mat m(static_cast<int>(pts.size()), 2);
  for (int i = 0; i < m.rows(); ++i) {
    m(i, 0) = pts[i][0];
    m(i, 1) = pts[i][1];
  }
  return m;
}

int cmd_element(const RunConfig& cfg)
{
  const MacroElement el = resolve_element(cfg);
  json nodes = json::array();
  for (int i = 0; i < el.ndof(); ++i)
    nodes.push_back({{"index", i},
                     {"label", el.dof_labels[i]},
                     {"entity", {el.dof_entity[i].first, el.dof_entity[i].second}},
                     {"edge_flip", static_cast<bool>(el.dof_flips[i])}});
  const json report = {
      {"name", el.name},
      {"degree", el.degree},
      {"components", el.ncomp},
      {"dim", el.ndof()},
      {"subcells", el.complex->num_subcells()},
      {"vandermonde_condition", el.cond_vandermonde},
      {"nodes", nodes},
      {"entity_dofs", el.entity_dofs()},
  };
  emit(cfg, report.dump(2) + "\n");
  return 0;
}

int cmd_tabulate(const RunConfig& cfg)
{
  if (cfg.max_deriv < 0 || cfg.max_deriv > 2)
    throw UsageError("--max-deriv must be 0, 1, or 2");
  const MacroElement el = resolve_element(cfg);
  const Mat pts = parse_points(cfg.points);
  const TabulatedValues tab = el.tabulate(pts, cfg.max_deriv);
  std::ostringstream csv;
  csv << "x,y,deriv,basis,component,value\n";
  for (int q = 0; q < tab.num_points(); ++q)
    for (int i = 0; i < tab.num_functions(); ++i)
      for (std::size_t d = 0; d < tab.derivs.size(); ++d)
        for (int c = 0; c < tab.ncomp; ++c)
          csv << fmt(pts(q, 0)) << ',' << fmt(pts(q, 1)) << ",d" << tab.derivs[d][0]
              << tab.derivs[d][1] << ',' << i << ',' << c << ','
              << fmt(tab[d](i, q * tab.ncomp + c)) << '\n';
  emit(cfg, csv.str());
  return 0;
}

int cmd_transform(const RunConfig& cfg)
{
  if (cfg.count < 1) throw UsageError("--count must be positive");
  const MacroElement ref = resolve_element(cfg);
  const TransformPlan plan = transform_plan(ref);
  std::mt19937_64 rng(cfg.seed);
  const auto draw = [&] { return (rng() >> 11) * 0x1.0p-53; };
  json cells = json::array();
  double worst_value = 0.0, worst_gradient = 0.0;
  for (int t = 0; t < cfg.count; ++t) {
    Mat verts(3, 2);
    double det = 0.0;
    do {
      for (int v = 0; v < 3; ++v)
        for (int d = 0; d < 2; ++d) verts(v, d) = 2.0 * draw() - 1.0;
      det = (verts(1, 0) - verts(0, 0)) * (verts(2, 1) - verts(0, 1)) -
            (verts(1, 1) - verts(0, 1)) * (verts(2, 0) - verts(0, 0));
    } while (std::abs(det) < 0.05);
    // Strictly interior sample points: tensor dofs are discontinuous across
    // subcell boundaries, where the owning-cell choice would be ambiguous.
    Mat pts(20, 2);
    for (int i = 0; i < pts.rows(); ++i) {
      double u = draw(), v = draw();
      if (u + v > 1.0) {
        u = 1.0 - u;
        v = 1.0 - v;
      }
      pts.row(i) = (1.0 - u - v) * verts.row(0) + u * verts.row(1) + v * verts.row(2);
    }
    const TabulatedValues fast = plan.tabulate(verts, pts, 1);
    const TabulatedValues oracle = oracle_rebuild(ref, verts).tabulate(pts, 1);
    const double dv = (fast[0] - oracle[0]).cwiseAbs().maxCoeff();
    const double dg = std::max((fast[1] - oracle[1]).cwiseAbs().maxCoeff(),
                               (fast[2] - oracle[2]).cwiseAbs().maxCoeff());
    worst_value = std::max(worst_value, dv);
    worst_gradient = std::max(worst_gradient, dg);
    cells.push_back({{"vertices",
                      {{verts(0, 0), verts(0, 1)},
                       {verts(1, 0), verts(1, 1)},
                       {verts(2, 0), verts(2, 1)}}},
                     {"value_gap", dv},
                     {"gradient_gap", dg}});
  }
  const json report = {
      {"element", ref.name},
      {"degree", ref.degree},
      {"seed", cfg.seed},
      {"fast_path", ref.mapping != MappingKind::OracleRebuild},
      {"cells", cells},
      {"max_value_gap", worst_value},
      {"max_gradient_gap", worst_gradient},
  };
  emit(cfg, report.dump(2) + "\n");
  return 0;
}

int cmd_dump_rule(const RunConfig& cfg)
{
  if (cfg.quad_degree < 0) throw UsageError("--quad-degree must be nonnegative");
  const auto [kind, param] = parse_variant(cfg.variant);
  const SplitSimplicialComplex split =
      make_split(reference_simplex_vertices(2), kind, param);
  const QuadratureRule rule = macro_rule(split, cfg.quad_degree);
  std::ostringstream csv;
  csv << "x,y,weight\n";
  for (int q = 0; q < rule.size(); ++q)
    csv << fmt(rule.points(q, 0)) << ',' << fmt(rule.points(q, 1)) << ','
        << fmt(rule.weights(q)) << '\n';
  emit(cfg, csv.str());
  return 0;
}

json complex_json(const SimplicialComplex& c)
{
  json verts = json::array();
  for (int i = 0; i < c.num_vertices(); ++i)
    verts.push_back({c.vertices(i, 0), c.vertices(i, 1)});
  return {{"vertices", verts}, {"topology", c.topology}};
}

int cmd_dump_complex(const RunConfig& cfg)
{
  const auto [kind, param] = parse_variant(cfg.variant);
  const SplitSimplicialComplex split =
      make_split(reference_simplex_vertices(2), kind, param);
  const json report = {
      {"variant", cfg.variant.empty() ? "none" : cfg.variant},
      {"subcells", split.num_subcells()},
      {"parent", complex_json(split.parent)},
      {"child", complex_json(split.child)},
      {"parent_entity", split.parent_entity},
  };
  emit(cfg, report.dump(2) + "\n");
  return 0;
}

// Point counts of the smallest standard symmetric triangle rules exact for
// products of two degree-k basis functions (degree 2k).
int symmetric_rule_size(int degree)
{
  switch (degree) {
    case 2: return 6;
    case 3: return 12;
    case 4: return 16;
    case 5: return 25;
  }
  throw UsageError("no tabulated rule size for degree " + std::to_string(degree));
}

int cmd_cost(const RunConfig& cfg)
{
  std::ostringstream csv;
  csv << "element,degree,ndof,subcells,nq_ref,nq,work\n";
  const Mat verts = reference_simplex_vertices(2);
  const std::vector<std::pair<std::string, int>> rows = {
      {"ps6", 2}, {"ps12", 2}, {"hct3", 3}, {"hct4", 4}};
  for (const auto& [name, degree] : rows) {
    const MacroElement el = make_element(name, degree, verts);
    const CostModel c = cost(el, symmetric_rule_size(degree));
    csv << name << ',' << degree << ',' << c.ndof << ',' << c.subcells << ','
        << c.nq_ref << ',' << c.nq << ',' << c.work << '\n';
  }
  // Classical quintic C1 baseline on the unsplit cell, dim 21.
  CostModel a5;
  a5.ndof = 21;
  a5.subcells = 1;
  a5.nq_ref = symmetric_rule_size(5);
  a5.nq = a5.nq_ref * a5.subcells;
  a5.work = a5.ndof * a5.ndof * a5.nq;
  csv << "argyris,5," << a5.ndof << ',' << a5.subcells << ',' << a5.nq_ref << ','
      << a5.nq << ',' << a5.work << '\n';
  emit(cfg, csv.str());
  return 0;
}

void require_plate(const std::string& name)
{
  if (catalogue().find(name) == catalogue().end())
    throw UsageError("unknown element '" + name + "'");
  if (name != "ps6" && name != "ps12" && name != "hct-red" && name != "hctred" &&
      name != "hct3" && name != "hct4")
    throw UsageError("element '" + name +
                     "' is not usable in the biharmonic study (expected ps6, "
                     "ps12, hct-red, hct3, or hct4)");
}

int cmd_convergence(const RunConfig& cfg)
{
  std::vector<int> levels = cfg.levels;
  for (int N : levels)
    if (N < 1) throw UsageError("levels must be positive");
  std::ostringstream csv;
  if (cfg.study == "biharmonic") {
    if (levels.empty()) levels = {2, 4, 8, 16};
    const std::vector<std::string> elements =
        cfg.elements.empty()
            ? std::vector<std::string>{"ps6", "ps12", "hct-red", "hct3", "hct4"}
            : cfg.elements;
    for (const std::string& name : elements) require_plate(name);
    csv << "element,N,NDOF,ErrorL2,ErrorH1,ErrorH2,RateL2,RateH1,RateH2\n";
    for (const std::string& name : elements) {
      const int degree = catalogue().at(name).natural_degree;
      const auto rows =
          biharmonic_sweep(name, degree, levels, cfg.nu, cfg.perturb, cfg.seed);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        csv << name << ',' << rows[i].n << ',' << rows[i].dofs;
        for (double e : rows[i].errors) csv << ',' << fmt(e);
        for (int k = 0; k < 3; ++k) {
          csv << ',';
          if (i > 0) {
            std::vector<std::pair<double, double>> pair = {
                {1.0 / rows[i - 1].n, rows[i - 1].errors[k]},
                {1.0 / rows[i].n, rows[i].errors[k]}};
            csv << fmt(convergence_rates(pair)[0]);
          }
        }
        csv << '\n';
      }
    }
  } else if (cfg.study == "stokes_sv") {
    if (!cfg.elements.empty())
      throw UsageError("element '" + cfg.elements.front() +
                       "' is not selectable in the stokes_sv study; the "
                       "velocity/pressure pair is fixed");
    if (levels.empty()) levels = {2, 4, 8};
    const auto rows = stokes_sweep(levels, cfg.perturb, cfg.seed);
    csv << "N,dofs,velocityL2,pressureL2,divL2,RateVelocity,RatePressure\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      csv << rows[i].n << ',' << rows[i].dofs;
      for (double e : rows[i].errors) csv << ',' << fmt(e);
      for (int k = 0; k < 2; ++k) {
        csv << ',';
        if (i > 0) {
          std::vector<std::pair<double, double>> pair = {
              {1.0 / rows[i - 1].n, rows[i - 1].errors[k]},
              {1.0 / rows[i].n, rows[i].errors[k]}};
          csv << fmt(convergence_rates(pair)[0]);
        }
      }
      csv << '\n';
    }
  } else {
    throw UsageError("unknown study '" + cfg.study +
                     "' (expected biharmonic or stokes_sv)");
  }
  emit(cfg, csv.str());
  return 0;
}

int cmd_sparsity(const RunConfig& cfg)
{
  const int N = cfg.levels.empty() ? 8 : cfg.levels.front();
  if (N < 1) throw UsageError("levels must be positive");
  // Sparsity is a structural property; the unperturbed mesh suffices.
  const Mesh mesh = structured_mesh(N);
  json report;
  if (cfg.study == "biharmonic") {
    require_plate(cfg.name);
    const MacroElement el = resolve_element(cfg);
    const LinearSystem sys = assemble_biharmonic(mesh, el, cfg.nu, plate_load());
    const SparsityInfo before = sparsity_report(sys, false);
    const SparsityInfo after = sparsity_report(sys, true);
    report = {{"study", "biharmonic"},
              {"element", el.name},
              {"N", N},
              {"rows", before.rows},
              {"constraints", sys.nconstraints},
              {"avg_nnz_per_row", before.avg_nnz_per_row},
              {"after_elimination",
               {{"rows", after.rows}, {"avg_nnz_per_row", after.avg_nnz_per_row}}}};
  } else if (cfg.study == "stokes_sv") {
    const LinearSystem sys = assemble_stokes_sv(mesh);
    const SparsityInfo before = sparsity_report(sys, false);
    const SparsityInfo after = sparsity_report(sys, true);
    report = {{"study", "stokes_sv"},
              {"N", N},
              {"rows", before.rows},
              {"constraints", sys.nconstraints},
              {"avg_nnz_per_row", before.avg_nnz_per_row},
              {"after_elimination",
               {{"rows", after.rows}, {"avg_nnz_per_row", after.avg_nnz_per_row}}}};
  } else {
    throw UsageError("unknown study '" + cfg.study +
                     "' (expected biharmonic or stokes_sv)");
  }
  emit(cfg, report.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  RunConfig cfg;
  CLI::App app{"Macroelement tabulation, inspection, and reproduction studies"};
  app.require_subcommand(1);

  const auto add_element_flags = [&](CLI::App* sub) {
    sub->add_option("--name", cfg.name, "Element name");
    sub->add_option("--degree", cfg.degree, "Polynomial degree (0 = element default)");
    sub->add_option("--variant", cfg.variant,
                    "Split variant: alfeld, iso, iso3, ps6, ps12");
  };
  const auto add_common_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed (env MACROTAB_SEED overrides)");
    sub->add_option("--out", cfg.out, "Write output to this file instead of stdout");
  };

  CLI::App* element = app.add_subcommand("element", "Describe a catalogue element (JSON)");
  add_element_flags(element);
  add_common_flags(element);

  CLI::App* tabulate =
      app.add_subcommand("tabulate", "Evaluate the nodal basis at points (CSV)");
  add_element_flags(tabulate);
  add_common_flags(tabulate);
  tabulate->add_option("--points", cfg.points, "Semicolon-separated x,y pairs");
  tabulate->add_option("--max-deriv", cfg.max_deriv, "Highest derivative order (0-2)");

  CLI::App* transform = app.add_subcommand(
      "transform", "Compare fast-path transforms against physical rebuilds (JSON)");
  add_element_flags(transform);
  add_common_flags(transform);
  transform->add_option("--count", cfg.count, "Number of random triangles");

  CLI::App* rule = app.add_subcommand("dump-rule", "Dump a macro quadrature rule (CSV)");
  rule->add_option("--variant", cfg.variant,
                   "Split variant: alfeld, iso, iso3, ps6, ps12 (default none)");
  rule->add_option("--quad-degree", cfg.quad_degree, "Guaranteed exactness degree");
  add_common_flags(rule);

  CLI::App* complex_cmd =
      app.add_subcommand("dump-complex", "Dump a split cell complex (JSON)");
  complex_cmd->add_option("--variant", cfg.variant,
                          "Split variant: alfeld, iso, iso3, ps6, ps12 (default none)");
  add_common_flags(complex_cmd);

  CLI::App* cost_cmd =
      app.add_subcommand("cost", "Element-matrix formation cost model (CSV)");
  add_common_flags(cost_cmd);

  CLI::App* conv = app.add_subcommand("convergence", "Mesh refinement studies (CSV)");
  conv->add_option("--study", cfg.study, "biharmonic or stokes_sv");
  conv->add_option("--elements", cfg.elements, "Elements to sweep (biharmonic only)")
      ->delimiter(',');
  conv->add_option("--levels", cfg.levels, "Mesh sizes N")->delimiter(',');
  conv->add_option("--nu", cfg.nu, "Poisson ratio of the plate form");
  conv->add_option("--perturb", cfg.perturb, "Relative interior vertex jitter");
  add_common_flags(conv);

  CLI::App* sparsity =
      app.add_subcommand("sparsity", "Assembled-matrix sparsity report (JSON)");
  add_element_flags(sparsity);
  add_common_flags(sparsity);
  sparsity->add_option("--study", cfg.study, "biharmonic or stokes_sv");
  sparsity->add_option("--levels", cfg.levels, "Mesh size N")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (const char* env = std::getenv("MACROTAB_SEED"))
    cfg.seed = std::strtoull(env, nullptr, 10);

  try {
    if (element->parsed()) return cmd_element(cfg);
    if (tabulate->parsed()) return cmd_tabulate(cfg);
    if (transform->parsed()) return cmd_transform(cfg);
    if (rule->parsed()) return cmd_dump_rule(cfg);
    if (complex_cmd->parsed()) return cmd_dump_complex(cfg);
    if (cost_cmd->parsed()) return cmd_cost(cfg);
    if (conv->parsed()) return cmd_convergence(cfg);
    if (sparsity->parsed()) return cmd_sparsity(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
