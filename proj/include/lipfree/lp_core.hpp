#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "lipfree/geometry.hpp"

namespace lipfree {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Dense linear programming
// ---------------------------------------------------------------------------

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  Vec coefficients;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

// maximize <objective, x>  s.t.  constraints,  lower <= x <= upper.
struct LPProblem {
  Vec objective;
  std::vector<LinearConstraint> constraints;
  Vec lower;
  Vec upper;

  // n variables with bounds [0, +inf).
  explicit LPProblem(std::size_t n = 0) : objective(n, 0.0), lower(n, 0.0), upper(n, kInf) {}

  std::size_t variables() const { return objective.size(); }
  void add(Vec coefficients, Relation relation, double rhs) {
    constraints.push_back({std::move(coefficients), relation, rhs});
  }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  double value = 0.0;
  Vec primal;
  // Multipliers of the constraints in the sign convention of a maximization
  // problem: y >= 0 on <=, y <= 0 on >=, free on =.
  Vec dual;
  // objective - A^T dual; positive entries sit at upper bounds, negative at
  // lower bounds.
  Vec reduced_cost;
  // b^T y plus the bound terms of the reduced costs.
  double dual_value = 0.0;
};

inline constexpr double kPivotTolerance = 1e-10;
inline constexpr double kFeasibilityTolerance = 1e-9;

// Two-phase dense tableau simplex with Bland's rule.
LPSolution lp_solve(const LPProblem& problem);

// ---------------------------------------------------------------------------
// Uncapacitated minimum-cost flow
// ---------------------------------------------------------------------------

struct FlowArc {
  std::size_t tail;
  std::size_t head;
  double cost;
};

// supply[v] = outflow - inflow required at v; supplies sum to zero.
struct FlowNetwork {
  Vec supply;
  std::vector<FlowArc> arcs;
};

enum class McfMethod { NetworkSimplex, SuccessiveShortestPaths };
enum class McfStatus { Optimal, Infeasible };

struct McfSolution {
  McfStatus status = McfStatus::Infeasible;
  double value = 0.0;
  Vec flow;
};

// Throws InvalidInput for unbalanced supplies or negative costs.
McfSolution mcf_solve(const FlowNetwork& network, McfMethod method = McfMethod::NetworkSimplex);

McfSolution network_simplex(const FlowNetwork& network);
McfSolution successive_shortest_paths(const FlowNetwork& network);

}  // namespace lipfree
