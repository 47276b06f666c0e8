#include "lipfree/problem.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lipfree/error.hpp"

namespace lipfree {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
  }
}

const json& member(const json& j, const std::string& where, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing '") + key + "'");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

long long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Vec vector_of(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  Vec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], where + "/" + std::to_string(i)));
  return v;
}

ConvexDomain::Shape parse_domain(const json& j) {
  const std::string where = "/domain";
  if (!j.is_object()) fail(where, "expected an object");
  const std::string type = text(member(j, where, "type"), where + "/type");
  if (type == "box") {
    allow_keys(j, where, {"type", "lo", "hi"});
    return Box{vector_of(member(j, where, "lo"), where + "/lo"), vector_of(member(j, where, "hi"), where + "/hi")};
  }
  if (type == "ball") {
    allow_keys(j, where, {"type", "center", "radius"});
    return Ball{vector_of(member(j, where, "center"), where + "/center"),
                number(member(j, where, "radius"), where + "/radius")};
  }
  if (type == "polytope") {
    allow_keys(j, where, {"type", "halfspaces"});
    const json& list = member(j, where, "halfspaces");
    if (!list.is_array()) fail(where + "/halfspaces", "expected an array");
    Polytope p;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = where + "/halfspaces/" + std::to_string(i);
      allow_keys(list[i], at, {"normal", "offset"});
      p.halfspaces.push_back(
          {vector_of(member(list[i], at, "normal"), at + "/normal"), number(member(list[i], at, "offset"), at + "/offset")});
    }
    return p;
  }
  fail(where + "/type", "unknown domain type '" + type + "'");
}

NormConfig parse_norm(const json& j) {
  const std::string where = "/norm";
  allow_keys(j, where, {"kind", "directions"});
  NormConfig norm;
  const std::string kind = text(member(j, where, "kind"), where + "/kind");
  if (kind == "l1") {
    norm.kind = NormKind::L1;
  } else if (kind == "l2") {
    norm.kind = NormKind::L2;
  } else if (kind == "linf") {
    norm.kind = NormKind::Linf;
  } else if (kind == "polyhedral") {
    norm.kind = NormKind::Polyhedral;
    const json& dirs = member(j, where, "directions");
    if (!dirs.is_array()) fail(where + "/directions", "expected an array");
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      norm.directions.push_back(vector_of(dirs[i], where + "/directions/" + std::to_string(i)));
    }
  } else {
    fail(where + "/kind", "unknown norm kind '" + kind + "'");
  }
  if (norm.kind != NormKind::Polyhedral && j.contains("directions")) {
    fail(where + "/directions", "only polyhedral norms take directions");
  }
  return norm;
}

std::vector<Atom> parse_molecule(const json& j) {
  if (!j.is_array()) fail("/molecule", "expected an array of atoms");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = "/molecule/" + std::to_string(i);
    allow_keys(j[i], at, {"point", "weight"});
    atoms.push_back({vector_of(member(j[i], at, "point"), at + "/point"), number(member(j[i], at, "weight"), at + "/weight")});
  }
  return atoms;
}

PointData parse_data(const json& j) {
  if (!j.is_array()) fail("/data", "expected an array of {point, value}");
  PointData data;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = "/data/" + std::to_string(i);
    allow_keys(j[i], at, {"point", "value"});
    data.points.push_back(vector_of(member(j[i], at, "point"), at + "/point"));
    data.values.push_back(number(member(j[i], at, "value"), at + "/value"));
  }
  return data;
}

GridConfig parse_grid(const json& j) {
  const std::string where = "/grid";
  allow_keys(j, where, {"h", "refine", "facets", "origin_centered"});
  GridConfig grid;
  if (j.contains("h")) grid.h = number(j["h"], where + "/h");
  if (j.contains("refine")) grid.refine = vector_of(j["refine"], where + "/refine");
  if (j.contains("facets")) {
    const json& f = j["facets"];
    if (f.is_array()) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        grid.facets.push_back(static_cast<int>(integer(f[i], where + "/facets/" + std::to_string(i))));
      }
    } else {
      grid.facets.push_back(static_cast<int>(integer(f, where + "/facets")));
    }
  }
  if (j.contains("origin_centered")) {
    if (!j["origin_centered"].is_boolean()) fail(where + "/origin_centered", "expected a boolean");
    grid.origin_centered = j["origin_centered"].get<bool>();
  }
  return grid;
}

TestConfig parse_tests(const json& j) {
  const std::string where = "/tests";
  allow_keys(j, where, {"battery", "m", "step", "probes", "seed", "function", "field", "g", "eps"});
  TestConfig t;
  if (j.contains("battery")) {
    t.battery = text(j["battery"], where + "/battery");
    if (!is_battery(t.battery)) fail(where + "/battery", "unknown battery '" + t.battery + "'");
  }
  if (j.contains("m")) t.m = static_cast<int>(integer(j["m"], where + "/m"));
  if (j.contains("step")) t.step = number(j["step"], where + "/step");
  if (j.contains("probes")) {
    const long long probes = integer(j["probes"], where + "/probes");
    if (probes < 1) fail(where + "/probes", "must be positive");
    t.probes = static_cast<std::size_t>(probes);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail(where + "/seed", "expected a nonnegative integer");
    t.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("function")) t.function = text(j["function"], where + "/function");
  if (j.contains("field")) t.field = text(j["field"], where + "/field");
  if (j.contains("g")) {
    allow_keys(j["g"], where + "/g", {"breaks", "values"});
    t.g = PiecewiseConstant{vector_of(member(j["g"], where + "/g", "breaks"), where + "/g/breaks"),
                            vector_of(member(j["g"], where + "/g", "values"), where + "/g/values")};
  }
  if (j.contains("eps")) t.eps = vector_of(j["eps"], where + "/eps");
  if (t.m < 1) fail(where + "/m", "must be at least 1");
  if (!(t.step > 0.0)) fail(where + "/step", "must be positive");
  if (battery_is_randomized(t.battery) && !t.seed) fail(where + "/seed", "randomized battery needs a seed");
  return t;
}

// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> position_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json dump_vec(const Vec& v) { return json(v); }

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message
                                  : message),
      line_(line),
      column_(column) {}

NormSpec NormConfig::build() const {
  switch (kind) {
    case NormKind::L1:
      return NormSpec::l1();
    case NormKind::L2:
      return NormSpec::l2();
    case NormKind::Linf:
      return NormSpec::linf();
    case NormKind::Polyhedral:
      return NormSpec::polyhedral(directions);
  }
  throw InvalidInput("unknown norm kind");
}

ConvexDomain ProblemSpec::build_domain() const {
  return std::visit(
      [](const auto& shape) -> ConvexDomain {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Box>) {
          return ConvexDomain::box(shape.lo, shape.hi);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return ConvexDomain::ball(shape.center, shape.radius);
        } else {
          return ConvexDomain::polytope(shape.halfspaces);
        }
      },
      domain);
}

bool is_battery(std::string_view name) {
  return std::find(std::begin(kBatteries), std::end(kBatteries), name) != std::end(kBatteries);
}

bool battery_is_randomized(std::string_view name) { return name == "roundtrip" || name == "compat"; }

ProblemSpec parse_problem(std::string_view source) {
  json j;
  try {
    j = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = position_of(source, e.byte > 0 ? e.byte - 1 : 0);
    std::string message = e.what();
    if (auto at = message.find("column "); at != std::string::npos) {
      if (auto colon = message.find(": ", at); colon != std::string::npos) message = message.substr(colon + 2);
    }
    throw ParseError(message, line, column);
  }
  allow_keys(j, "/", {"domain", "norm", "molecule", "data", "grid", "tests"});
  ProblemSpec spec;
  spec.domain = parse_domain(member(j, "/", "domain"));
  spec.norm = j.contains("norm") ? parse_norm(j["norm"]) : NormConfig{};
  if (j.contains("molecule")) spec.molecule = parse_molecule(j["molecule"]);
  if (j.contains("data")) spec.data = parse_data(j["data"]);
  if (j.contains("grid")) spec.grid = parse_grid(j["grid"]);
  if (j.contains("tests")) spec.tests = parse_tests(j["tests"]);
  try {
    const ConvexDomain domain = spec.build_domain();
    spec.norm.build();
    for (const auto& a : spec.molecule) {
      if (a.point.size() != domain.dim()) fail("/molecule", "atom dimension does not match the domain");
    }
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("invalid problem: ") + e.what());
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

std::string serialize_problem(const ProblemSpec& spec) {
  json j;
  std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Box>) {
          j["domain"] = {{"type", "box"}, {"lo", dump_vec(shape.lo)}, {"hi", dump_vec(shape.hi)}};
        } else if constexpr (std::is_same_v<T, Ball>) {
          j["domain"] = {{"type", "ball"}, {"center", dump_vec(shape.center)}, {"radius", shape.radius}};
        } else {
          json list = json::array();
          for (const auto& hs : shape.halfspaces) list.push_back({{"normal", dump_vec(hs.normal)}, {"offset", hs.offset}});
          j["domain"] = {{"type", "polytope"}, {"halfspaces", list}};
        }
      },
      spec.domain);

  j["norm"] = {{"kind", to_string(spec.norm.kind)}};
  if (spec.norm.kind == NormKind::Polyhedral) j["norm"]["directions"] = spec.norm.directions;

  if (!spec.molecule.empty()) {
    json atoms = json::array();
    for (const auto& a : spec.molecule) atoms.push_back({{"point", dump_vec(a.point)}, {"weight", a.weight}});
    j["molecule"] = atoms;
  }
  if (spec.data) {
    json rows = json::array();
    for (std::size_t i = 0; i < spec.data->points.size(); ++i) {
      rows.push_back({{"point", dump_vec(spec.data->points[i])}, {"value", spec.data->values[i]}});
    }
    j["data"] = rows;
  }

  json grid = json::object();
  if (spec.grid.h) grid["h"] = *spec.grid.h;
  if (!spec.grid.refine.empty()) grid["refine"] = spec.grid.refine;
  if (!spec.grid.facets.empty()) grid["facets"] = spec.grid.facets;
  if (spec.grid.origin_centered) grid["origin_centered"] = true;
  if (!grid.empty()) j["grid"] = grid;

  if (spec.tests) {
    const TestConfig& t = *spec.tests;
    json tests = {{"m", t.m}, {"step", t.step}, {"probes", t.probes}};
    if (!t.battery.empty()) tests["battery"] = t.battery;
    if (t.seed) tests["seed"] = *t.seed;
    if (!t.function.empty()) tests["function"] = t.function;
    if (!t.field.empty()) tests["field"] = t.field;
    if (t.g) tests["g"] = {{"breaks", t.g->breaks}, {"values", t.g->values}};
    if (!t.eps.empty()) tests["eps"] = t.eps;
    j["tests"] = tests;
  }
  return j.dump(2) + "\n";
}

}  // namespace lipfree
