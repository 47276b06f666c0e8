#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "lipfree/error.hpp"
#include "lipfree/lp_core.hpp"

namespace lipfree {

namespace {

constexpr double kOptimalityTolerance = 1e-9;
constexpr std::size_t kIterationLimit = 2000000;

// Original variable x_j = offset + sum coef * internal column.
struct VariableMap {
  double offset = 0.0;
  std::vector<std::pair<std::size_t, double>> columns;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * (cols + 1), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return cells_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t e, Vec& reduced, double& objective) {
    const double p = at(r, e);
    double* row = &cells_[r * (cols_ + 1)];
    for (std::size_t j = 0; j <= cols_; ++j) row[j] /= p;
    row[e] = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* other = &cells_[i * (cols_ + 1)];
      const double f = other[e];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) other[j] -= f * row[j];
      other[e] = 0.0;
    }
    const double f = reduced[e];
    if (f != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) reduced[j] -= f * row[j];
      objective -= f * row[cols_];
      reduced[e] = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> cells_;
};

enum class PhaseResult { Optimal, Unbounded };

// d_j = c_B^T B^{-1} A_j - c_j; z = c_B^T B^{-1} b.
void price(const Tableau& t, const std::vector<std::size_t>& basis, const Vec& cost, Vec& reduced, double& objective) {
  reduced.assign(t.cols(), 0.0);
  objective = 0.0;
  for (std::size_t j = 0; j < t.cols(); ++j) reduced[j] = -cost[j];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const double cb = cost[basis[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j < t.cols(); ++j) reduced[j] += cb * t.at(i, j);
    objective += cb * t.rhs(i);
  }
}

// Maximizes with Bland's rule over columns below `allowed_end`.
PhaseResult run_simplex(Tableau& t, std::vector<std::size_t>& basis, Vec& reduced, double& objective,
                        std::size_t allowed_end) {
  for (std::size_t iter = 0; iter < kIterationLimit; ++iter) {
    std::size_t entering = allowed_end;
    for (std::size_t j = 0; j < allowed_end; ++j) {
      if (reduced[j] < -kOptimalityTolerance) {
        entering = j;
        break;
      }
    }
    if (entering == allowed_end) return PhaseResult::Optimal;

    std::size_t leaving = t.rows();
    double best_ratio = kInf;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, entering);
      if (a <= kPivotTolerance) continue;
      const double ratio = std::max(0.0, t.rhs(i)) / a;
      const double tie = 1e-12 * (1.0 + std::abs(best_ratio == kInf ? ratio : best_ratio));
      if (ratio < best_ratio - tie) {
        best_ratio = ratio;
        leaving = i;
      } else if (std::abs(ratio - best_ratio) <= tie && basis[i] < basis[leaving]) {
        leaving = i;
      }
    }
    if (leaving == t.rows()) return PhaseResult::Unbounded;
    t.pivot(leaving, entering, reduced, objective);
    basis[leaving] = entering;
  }
  throw std::runtime_error("simplex iteration limit exceeded");
}

void validate(const LPProblem& p) {
  const std::size_t n = p.variables();
  if (p.lower.size() != n || p.upper.size() != n) throw InvalidInput("LP bounds must match the number of variables");
  for (double c : p.objective) {
    if (!std::isfinite(c)) throw InvalidInput("LP objective must be finite");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(p.lower[j]) || std::isnan(p.upper[j]) || p.lower[j] == kInf || p.upper[j] == -kInf) {
      throw InvalidInput("LP variable bounds are malformed");
    }
  }
  for (const auto& row : p.constraints) {
    if (row.coefficients.size() != n) throw InvalidInput("LP constraint row has the wrong number of coefficients");
    if (!std::isfinite(row.rhs)) throw InvalidInput("LP right-hand sides must be finite");
    for (double a : row.coefficients) {
      if (!std::isfinite(a)) throw InvalidInput("LP coefficients must be finite");
    }
  }
}

}  // namespace

LPSolution lp_solve(const LPProblem& problem) {
  validate(problem);
  const std::size_t n = problem.variables();
  LPSolution solution;

  std::vector<VariableMap> vars(n);
  std::vector<std::pair<std::size_t, double>> bound_rows;  // column <= rhs
  std::size_t structural = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = problem.lower[j];
    const double hi = problem.upper[j];
    if (lo > hi) return solution;
    if (std::isfinite(lo)) {
      vars[j] = {lo, {{structural, 1.0}}};
      if (std::isfinite(hi)) bound_rows.emplace_back(structural, hi - lo);
      ++structural;
    } else if (std::isfinite(hi)) {
      vars[j] = {hi, {{structural, -1.0}}};
      ++structural;
    } else {
      vars[j] = {0.0, {{structural, 1.0}, {structural + 1, -1.0}}};
      structural += 2;
    }
  }

  struct Row {
    Vec coef;
    Relation relation;
    double rhs;
    double sign;
  };
  std::vector<Row> rows;
  for (const auto& c : problem.constraints) {
    Row row{Vec(structural, 0.0), c.relation, c.rhs, 1.0};
    for (std::size_t j = 0; j < n; ++j) {
      const double a = c.coefficients[j];
      if (a == 0.0) continue;
      row.rhs -= a * vars[j].offset;
      for (const auto& [col, coef] : vars[j].columns) row.coef[col] += a * coef;
    }
    rows.push_back(std::move(row));
  }
  for (const auto& [col, rhs] : bound_rows) {
    Row row{Vec(structural, 0.0), Relation::LessEqual, rhs, 1.0};
    row.coef[col] = 1.0;
    rows.push_back(std::move(row));
  }
  double scale = 1.0;
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (auto& row : rows) {
    if (row.rhs < 0.0) {
      for (double& a : row.coef) a = -a;
      row.rhs = -row.rhs;
      row.sign = -1.0;
      if (row.relation == Relation::LessEqual) {
        row.relation = Relation::GreaterEqual;
      } else if (row.relation == Relation::GreaterEqual) {
        row.relation = Relation::LessEqual;
      }
    }
    scale = std::max(scale, row.rhs);
    if (row.relation != Relation::Equal) ++slacks;
    if (row.relation != Relation::LessEqual) ++artificials;
  }

  const std::size_t m = rows.size();
  const std::size_t first_slack = structural;
  const std::size_t first_artificial = structural + slacks;
  const std::size_t cols = first_artificial + artificials;
  Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  std::vector<std::size_t> unit_col(m);
  std::size_t next_slack = first_slack;
  std::size_t next_art = first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < structural; ++j) t.at(i, j) = rows[i].coef[j];
    t.rhs(i) = rows[i].rhs;
    switch (rows[i].relation) {
      case Relation::LessEqual:
        t.at(i, next_slack) = 1.0;
        unit_col[i] = next_slack++;
        break;
      case Relation::GreaterEqual:
        t.at(i, next_slack++) = -1.0;
        t.at(i, next_art) = 1.0;
        unit_col[i] = next_art++;
        break;
      case Relation::Equal:
        t.at(i, next_art) = 1.0;
        unit_col[i] = next_art++;
        break;
    }
    basis[i] = unit_col[i];
  }

  Vec reduced;
  double objective = 0.0;
  if (artificials > 0) {
    Vec phase1(cols, 0.0);
    for (std::size_t j = first_artificial; j < cols; ++j) phase1[j] = -1.0;
    price(t, basis, phase1, reduced, objective);
    run_simplex(t, basis, reduced, objective, first_artificial);
    if (objective < -kFeasibilityTolerance * scale) {
      solution.status = LPStatus::Infeasible;
      return solution;
    }
    // Drive zero-level artificials out of the basis; rows without a usable
    // pivot are redundant and keep their artificial at zero.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < first_artificial) continue;
      std::size_t best = first_artificial;
      double best_abs = kPivotTolerance;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (std::abs(t.at(i, j)) > best_abs) {
          best_abs = std::abs(t.at(i, j));
          best = j;
        }
      }
      if (best == first_artificial) continue;
      t.pivot(i, best, reduced, objective);
      basis[i] = best;
    }
  }

  Vec phase2(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [col, coef] : vars[j].columns) phase2[col] += problem.objective[j] * coef;
  }
  price(t, basis, phase2, reduced, objective);
  if (run_simplex(t, basis, reduced, objective, first_artificial) == PhaseResult::Unbounded) {
    solution.status = LPStatus::Unbounded;
    return solution;
  }

  Vec internal(cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) internal[basis[i]] = std::max(0.0, t.rhs(i));
  solution.status = LPStatus::Optimal;
  solution.primal.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double x = vars[j].offset;
    for (const auto& [col, coef] : vars[j].columns) x += coef * internal[col];
    solution.primal[j] = x;
  }
  solution.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) solution.value += problem.objective[j] * solution.primal[j];

  const std::size_t original_rows = problem.constraints.size();
  solution.dual.assign(original_rows, 0.0);
  for (std::size_t i = 0; i < original_rows; ++i) solution.dual[i] = rows[i].sign * reduced[unit_col[i]];
  solution.reduced_cost = problem.objective;
  solution.dual_value = 0.0;
  for (std::size_t i = 0; i < original_rows; ++i) {
    const auto& c = problem.constraints[i];
    solution.dual_value += c.rhs * solution.dual[i];
    for (std::size_t j = 0; j < n; ++j) solution.reduced_cost[j] -= c.coefficients[j] * solution.dual[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double r = solution.reduced_cost[j];
    const double bound = r > 0.0 ? problem.upper[j] : problem.lower[j];
    if (r != 0.0 && std::isfinite(bound)) solution.dual_value += r * bound;
  }
  return solution;
}

}  // namespace lipfree
