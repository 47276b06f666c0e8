#include "lipfree/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "lipfree/error.hpp"

namespace lipfree {
namespace {

void check_knots(const Vec& knots, const char* what) {
  if (knots.size() < 2) throw InvalidInput(std::string(what) + " needs at least two breakpoints");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i])) throw InvalidInput(std::string(what) + " has a non-finite breakpoint");
    if (i > 0 && !(knots[i] > knots[i - 1])) throw InvalidInput(std::string(what) + " breakpoints must increase strictly");
  }
}

// Index i with knots[i] <= x < knots[i+1]; the right end maps to the last piece.
std::size_t locate(const Vec& knots, double x) {
  if (!(x >= knots.front() && x <= knots.back())) throw InvalidInput("evaluation point outside the interval");
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  std::size_t i = static_cast<std::size_t>(it - knots.begin());
  if (i == 0) return 0;
  return std::min(i - 1, knots.size() - 2);
}

}  // namespace

void validate(const PiecewiseConstant& g) {
  check_knots(g.breaks, "piecewise-constant function");
  if (g.values.size() + 1 != g.breaks.size()) throw InvalidInput("piecewise-constant function needs one value per piece");
  for (double v : g.values) {
    if (!std::isfinite(v)) throw InvalidInput("piecewise-constant function has a non-finite value");
  }
  if (!(g.breaks.front() < 0.0 && g.breaks.back() > 0.0)) throw InvalidInput("interval must contain the base point 0");
}

PiecewiseLinear integrate_from_zero(const PiecewiseConstant& g) {
  validate(g);
  PiecewiseLinear f;
  f.knots = g.breaks;
  if (!std::binary_search(f.knots.begin(), f.knots.end(), 0.0)) {
    f.knots.insert(std::upper_bound(f.knots.begin(), f.knots.end(), 0.0), 0.0);
  }
  const std::size_t n = f.knots.size();
  const std::size_t zero = static_cast<std::size_t>(std::find(f.knots.begin(), f.knots.end(), 0.0) - f.knots.begin());
  f.knot_values.assign(n, 0.0);
  // The slope on (knots[i], knots[i+1]) is the value of g at its midpoint.
  auto slope = [&](std::size_t i) { return evaluate(g, 0.5 * (f.knots[i] + f.knots[i + 1])); };
  for (std::size_t i = zero; i + 1 < n; ++i) {
    f.knot_values[i + 1] = f.knot_values[i] + slope(i) * (f.knots[i + 1] - f.knots[i]);
  }
  for (std::size_t i = zero; i > 0; --i) {
    f.knot_values[i - 1] = f.knot_values[i] - slope(i - 1) * (f.knots[i] - f.knots[i - 1]);
  }
  return f;
}

PiecewiseConstant differentiate(const PiecewiseLinear& f) {
  check_knots(f.knots, "piecewise-linear function");
  if (f.knot_values.size() != f.knots.size()) throw InvalidInput("piecewise-linear function needs one value per knot");
  PiecewiseConstant g;
  g.breaks = f.knots;
  for (std::size_t i = 0; i + 1 < f.knots.size(); ++i) {
    g.values.push_back((f.knot_values[i + 1] - f.knot_values[i]) / (f.knots[i + 1] - f.knots[i]));
  }
  return g;
}

double sup_norm(const PiecewiseConstant& g) {
  double best = 0.0;
  for (double v : g.values) best = std::max(best, std::abs(v));
  return best;
}

double lip_constant(const PiecewiseLinear& f) { return sup_norm(differentiate(f)); }

double evaluate(const PiecewiseLinear& f, double x) {
  const std::size_t i = locate(f.knots, x);
  const double t = (x - f.knots[i]) / (f.knots[i + 1] - f.knots[i]);
  return f.knot_values[i] + t * (f.knot_values[i + 1] - f.knot_values[i]);
}

double evaluate(const PiecewiseConstant& g, double x) { return g.values[locate(g.breaks, x)]; }

double max_difference(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  validate(a);
  validate(b);
  if (a.breaks.front() != b.breaks.front() || a.breaks.back() != b.breaks.back()) {
    throw InvalidInput("compared functions live on different intervals");
  }
  Vec merged;
  std::merge(a.breaks.begin(), a.breaks.end(), b.breaks.begin(), b.breaks.end(), std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    const double mid = 0.5 * (merged[i] + merged[i + 1]);
    worst = std::max(worst, std::abs(evaluate(a, mid) - evaluate(b, mid)));
  }
  return worst;
}

}  // namespace lipfree
