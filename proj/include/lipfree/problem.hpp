#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lipfree/freenorm.hpp"
#include "lipfree/geometry.hpp"
#include "lipfree/lipcalc.hpp"
#include "lipfree/piecewise.hpp"

namespace lipfree {

// Problem file syntax or schema error. line and column are 1-based and 0
// when the error is not tied to a source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct NormConfig {
  NormKind kind = NormKind::L2;
  std::vector<Vec> directions;  // polyhedral only

  NormSpec build() const;
  friend bool operator==(const NormConfig&, const NormConfig&) = default;
};

struct GridConfig {
  std::optional<double> h;
  Vec refine;
  std::vector<int> facets;
  bool origin_centered = false;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct TestConfig {
  std::string battery;
  int m = 256;
  double step = 1e-4;
  std::size_t probes = 1000;
  std::optional<std::uint64_t> seed;
  std::string function;
  std::string field;
  std::optional<PiecewiseConstant> g;
  Vec eps;

  friend bool operator==(const TestConfig&, const TestConfig&) = default;
};

struct ProblemSpec {
  ConvexDomain::Shape domain;
  NormConfig norm;
  std::vector<Atom> molecule;
  std::optional<PointData> data;
  GridConfig grid;
  std::optional<TestConfig> tests;

  ConvexDomain build_domain() const;
  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

inline constexpr const char* kBatteries[] = {"roundtrip", "compat", "mollify", "isometry1d"};
bool is_battery(std::string_view name);
bool battery_is_randomized(std::string_view name);

ProblemSpec parse_problem(std::string_view text);
ProblemSpec load_problem(const std::string& path);
std::string serialize_problem(const ProblemSpec& spec);

}  // namespace lipfree
