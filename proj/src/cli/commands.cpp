#include "lipfree/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lipfree/beckmann.hpp"
#include "lipfree/error.hpp"
#include "lipfree/freenorm.hpp"
#include "lipfree/operator_t.hpp"
#include "lipfree/piecewise.hpp"
#include "lipfree/problem.hpp"

namespace lipfree {
namespace {

std::string fixed9(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.9f", v == 0.0 || std::abs(v) < 5e-10 ? 0.0 : v);
  return buffer;
}

std::string sci(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.3e", v);
  return buffer;
}

struct Report {
  std::ostream& out;
  int passed = 0;
  int failed = 0;

  void line(bool ok, const std::string& what) {
    out << (ok ? "PASS " : "FAIL ") << what << '\n';
    (ok ? passed : failed)++;
  }
};

// Named smooth test functions, all vanishing at 0.
SampledFunction builtin_function(const std::string& name, std::size_t n) {
  if (name == "linear") {
    return SampledFunction(n, [n](std::span<const double> y) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += (k + 1.0) * y[k];
      return s;
    });
  }
  if (name == "quadratic") {
    return SampledFunction(n, [](std::span<const double> y) { return 0.5 * dot(y, y); });
  }
  if (name == "norm2" || name == "abs") {
    return SampledFunction(n, [](std::span<const double> y) { return euclidean_norm(y); });
  }
  if (name == "wave") {
    return SampledFunction(n, [n](std::span<const double> y) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += y[k] / (k + 1.0);
      return std::sin(s);
    });
  }
  throw InvalidInput("unknown test function '" + name + "'");
}

double roundtrip_budget(const std::string& name) {
  if (name == "linear") return 1e-9;
  if (name == "quadratic") return 1e-6;
  if (name == "wave") return 1e-5;
  if (name == "norm2" || name == "abs") return 1e-3;
  return 1e-2;
}

SampledFunction mcshane_from(const ProblemSpec& spec, const NormSpec& norm) {
  if (!spec.data) throw InvalidInput("function 'mcshane' needs a data section");
  validate_point_data(*spec.data);
  return mcshane_extend(*spec.data, lip_constant_finite(*spec.data, norm), norm);
}

void battery_roundtrip(const ProblemSpec& spec, const TestConfig& t, Report& report) {
  const ConvexDomain domain = spec.build_domain();
  const NormSpec norm = spec.norm.build();
  std::vector<std::string> names;
  if (!t.function.empty()) {
    names.push_back(t.function);
  } else {
    names = {"linear", "quadratic", "wave", "norm2"};
    if (spec.data) names.push_back("mcshane");
  }
  for (const auto& name : names) {
    const SampledFunction f = name == "mcshane" ? mcshane_from(spec, norm) : builtin_function(name, domain.dim());
    const double err = roundtrip_error(f, domain, t.step, t.m, t.probes, *t.seed);
    const double budget = roundtrip_budget(name);
    report.line(err <= budget, "roundtrip " + name + " max_error=" + sci(err) + " budget=" + sci(budget));
  }
}

void battery_compat(const ProblemSpec& spec, const TestConfig& t, Report& report) {
  const ConvexDomain domain = spec.build_domain();
  const NormSpec norm = spec.norm.build();
  const std::size_t n = domain.dim();
  const bool rotation = t.field.empty() || t.field == "rotation";
  const bool gradients = t.field.empty() || t.field == "gradient";
  if (!rotation && !gradients) throw InvalidInput("unknown test field '" + t.field + "'");

  if (rotation) {
    if (n < 2) throw InvalidInput("rotation field needs dimension >= 2");
    const VectorField rot(n, [n](std::span<const double> p) {
      Vec g(n, 0.0);
      g[0] = -p[1];
      g[1] = p[0];
      return g;
    });
    Vec x(n, 0.0), y(n, 0.0);
    x[0] = 1.0;
    y[1] = 1.0;
    if (!domain.contains(x) || !domain.contains(y)) {
      report.line(false, "compat rotation: canonical pair lies outside the domain");
    } else {
      const std::vector<PointPair> pair = {{x, y}};
      const double r = compat_residual(rot, domain, pair, t.m, norm).max_residual;
      report.line(r >= 0.5, "compat rotation residual=" + fixed9(r) + " expected>=0.5 (not a gradient)");
    }
  }
  if (gradients) {
    std::vector<std::string> names;
    if (!t.function.empty()) {
      names.push_back(t.function);
    } else {
      names = {"linear", "quadratic", "wave"};
    }
    for (const auto& name : names) {
      const SampledFunction f = name == "mcshane" ? mcshane_from(spec, norm) : builtin_function(name, n);
      const VectorField g = gradient(f, domain, t.step);
      const double r = compat_residual(g, domain, t.probes, *t.seed, t.m, norm).max_residual;
      report.line(r <= 1e-4, "compat gradient(" + name + ") residual=" + sci(r) + " budget=1.000e-04");
    }
  }
}

std::shared_ptr<const Grid> grid_from(const ProblemSpec& spec, double h) {
  return std::make_shared<const Grid>(
      Grid::build(spec.build_domain(), h, spec.grid.origin_centered ? GridAlignment::OriginCentered : GridAlignment::CellCorner));
}

void battery_mollify(const ProblemSpec& spec, const TestConfig& t, Report& report) {
  const ConvexDomain domain = spec.build_domain();
  if (domain.dim() != 1) throw InvalidInput("mollify battery runs on 1D domains");
  if (!spec.grid.h) throw InvalidInput("mollify battery needs grid.h");
  const double h = *spec.grid.h;
  const auto grid = grid_from(spec, h);
  const SampledFunction f = builtin_function(t.function.empty() ? "abs" : t.function, 1);
  if (!t.field.empty() && t.field != "indicator") throw InvalidInput("mollify battery pairs against 'indicator' only");

  // Indicator of (0,1) on the cells whose centers it contains.
  CellField field{grid, Vec(grid->cell_count(), 0.0)};
  for (std::size_t c = 0; c < grid->cell_count(); ++c) {
    const double x = grid->center(c)[0];
    if (x > 0.0 && x < 1.0) field.values[c] = 1.0;
  }
  const Vec eps = t.eps.empty() ? Vec{8 * h, 4 * h, 2 * h, h} : t.eps;
  const Vec one = {1.0};
  const double expected = f(one);
  const Vec pairings = mollify_pairing_test(f, field, eps);
  double previous = INFINITY;
  bool monotone = true;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double err = std::abs(pairings[i] - expected);
    monotone = monotone && err <= previous + 1e-12;
    previous = err;
    report.out << "  eps=" << fixed9(eps[i]) << " pairing=" << fixed9(pairings[i]) << '\n';
  }
  report.line(monotone, "mollify error non-increasing as eps decreases");
  report.line(previous <= 1e-3, "mollify final pairing within 1e-3 of " + fixed9(expected) + " (error " + sci(previous) + ")");
}

void battery_isometry1d(const ProblemSpec& spec, const TestConfig& t, Report& report) {
  const auto* box = std::get_if<Box>(&spec.domain);
  if (!box || box->lo.size() != 1) throw InvalidInput("isometry1d battery runs on a 1D box");
  const double lo = box->lo[0];
  const double hi = box->hi[0];
  PiecewiseConstant g;
  if (t.g) {
    g = *t.g;
    validate(g);
    if (g.breaks.front() != lo || g.breaks.back() != hi) throw InvalidInput("tests.g must span the domain interval");
  } else {
    g.breaks = {lo, 0.0, std::min(1.0, 0.5 * hi), hi};
    g.values = {-1.0, 1.0, -1.0};
  }
  const PiecewiseLinear f = integrate_from_zero(g);
  const double lip = lip_constant(f);
  const double sup = sup_norm(g);
  report.line(std::abs(lip - sup) <= 1e-12, "isometry1d lip(Tg)=" + fixed9(lip) + " sup|g|=" + fixed9(sup));
  const double back = max_difference(differentiate(f), g);
  report.line(back <= 1e-12, "isometry1d inverse max|T^-1 T g - g|=" + sci(back));
  report.line(evaluate(f, 0.0) == 0.0, "isometry1d Tg(0)=0");
}

double pick_h(const ProblemSpec& spec, const std::vector<double>& flag) {
  if (!flag.empty()) return flag.front();
  if (spec.grid.h) return *spec.grid.h;
  if (!spec.grid.refine.empty()) return spec.grid.refine.front();
  throw InvalidInput("beckmann needs a grid spacing (--grid-h or grid.h)");
}

int cmd_norm(const std::string& path, const std::string& method, const std::vector<double>& grid_h,
             const std::vector<int>& facets, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const ProblemSpec spec = load_problem(path);
  const ConvexDomain domain = spec.build_domain();
  const NormSpec norm = spec.norm.build();
  const Molecule mu = molecule_validate(spec.molecule, domain);
  const bool want_dual = method != "beckmann";
  const bool want_primal = method != "dual";
  if (!want_primal && !out_path.empty()) throw InvalidInput("--out writes the Beckmann field; use --method beckmann or both");

  double dual = 0.0;
  double primal = 0.0;
  if (want_dual) dual = kr_dual_norm(mu, norm).value;
  if (want_primal) {
    const auto grid = grid_from(spec, pick_h(spec, grid_h));
    const SourceVector source = assemble_source(mu, grid);
    BeckmannOptions options;
    options.facets = !facets.empty() ? facets.front() : !spec.grid.facets.empty() ? spec.grid.facets.front() : kDefaultFacets;
    const BeckmannResult result = solve_beckmann(source, norm, options);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    primal = result.value;
    if (!out_path.empty()) {
      std::ofstream file(out_path);
      if (!file) throw InvalidInput("cannot write '" + out_path + "'");
      write_edge_csv(file, result.field);
    }
  }
  if (want_dual && want_primal) {
    out << "dual " << fixed9(dual) << '\n' << "beckmann " << fixed9(primal) << '\n' << "gap " << fixed9(primal - dual) << '\n';
  } else {
    out << fixed9(want_dual ? dual : primal) << '\n';
  }
  return kExitOk;
}

int cmd_converge(const std::string& path, const std::vector<double>& grid_h, const std::vector<int>& facets,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
  const ProblemSpec spec = load_problem(path);
  const ConvexDomain domain = spec.build_domain();
  Vec h_list = grid_h;
  if (h_list.empty()) h_list = spec.grid.refine;
  if (h_list.empty() && spec.grid.h) h_list.push_back(*spec.grid.h);
  std::vector<int> k_list = facets;
  if (k_list.empty()) k_list = spec.grid.facets;
  if (k_list.empty()) k_list.push_back(kDefaultFacets);

  const StudyProblem problem{domain, spec.norm.build(), molecule_validate(spec.molecule, domain),
                             spec.grid.origin_centered ? GridAlignment::OriginCentered : GridAlignment::CellCorner};
  const auto rows = refine_study(problem, h_list, k_list);
  bool any_failed = false;
  for (const auto& r : rows) {
    if (r.failed) {
      err << "row h=" << fixed9(r.h) << " k=" << r.k << " failed: " << r.error << '\n';
      any_failed = true;
    }
  }
  if (out_path.empty()) {
    write_study_csv(out, rows);
  } else {
    std::ofstream file(out_path);
    if (!file) throw InvalidInput("cannot write '" + out_path + "'");
    write_study_csv(file, rows);
  }
  return any_failed ? kExitInfeasible : kExitOk;
}

int cmd_check(const std::string& path, const std::string& battery_flag, std::optional<std::uint64_t> seed_flag,
              std::ostream& out) {
  const ProblemSpec spec = load_problem(path);
  TestConfig t = spec.tests.value_or(TestConfig{});
  if (!battery_flag.empty()) t.battery = battery_flag;
  if (seed_flag) t.seed = seed_flag;
  if (t.battery.empty()) throw InvalidInput("no battery given (--battery or tests.battery)");
  if (!is_battery(t.battery)) throw InvalidInput("unknown battery '" + t.battery + "'");
  if (battery_is_randomized(t.battery) && !t.seed) throw InvalidInput("battery '" + t.battery + "' needs a seed");

  Report report{out};
  if (t.battery == "roundtrip") {
    battery_roundtrip(spec, t, report);
  } else if (t.battery == "compat") {
    battery_compat(spec, t, report);
  } else if (t.battery == "mollify") {
    battery_mollify(spec, t, report);
  } else {
    battery_isometry1d(spec, t, report);
  }
  out << "summary: " << report.passed << " passed, " << report.failed << " failed\n";
  return report.failed > 0 ? kExitCheckFailed : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lipschitz-free norms over convex domains"};
  app.require_subcommand(1);

  std::string problem;
  std::string method = "dual";
  std::vector<double> grid_h;
  std::vector<int> facets;
  std::string out_path;
  std::string battery;
  std::uint64_t seed = 0;

  auto* norm = app.add_subcommand("norm", "free-space norm of the problem's molecule");
  norm->add_option("--problem", problem, "problem file (JSON)")->required();
  norm->add_option("--method", method, "dual | beckmann | both")->check(CLI::IsMember({"dual", "beckmann", "both"}));
  norm->add_option("--grid-h", grid_h, "grid spacing");
  norm->add_option("--facets", facets, "stencil directions k");
  norm->add_option("--out", out_path, "edge CSV of the optimal flow");

  auto* converge = app.add_subcommand("converge", "primal/dual refinement study");
  converge->add_option("--problem", problem, "problem file (JSON)")->required();
  converge->add_option("--grid-h", grid_h, "grid spacing, repeatable");
  converge->add_option("--facets", facets, "stencil directions k, repeatable");
  converge->add_option("--out", out_path, "CSV output path");

  auto* check = app.add_subcommand("check", "run an operator battery");
  check->add_option("--problem", problem, "problem file (JSON)")->required();
  check->add_option("--battery", battery, "roundtrip | compat | mollify | isometry1d");
  auto* seed_opt = check->add_option("--seed", seed, "random seed");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (*norm) return cmd_norm(problem, method, grid_h, facets, out_path, out, err);
    if (*converge) return cmd_converge(problem, grid_h, facets, out_path, out, err);
    std::optional<std::uint64_t> seed_flag;
    if (*seed_opt) seed_flag = seed;
    return cmd_check(problem, battery, seed_flag, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InfeasibleProblem& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitInfeasible;
  }
}

}  // namespace lipfree
