#pragma once

#include <vector>

#include "lipfree/geometry.hpp"

namespace lipfree {

// g = values[i] on (breaks[i], breaks[i+1]); the interval (breaks.front(),
// breaks.back()) contains 0.
struct PiecewiseConstant {
  Vec breaks;
  Vec values;

  friend bool operator==(const PiecewiseConstant&, const PiecewiseConstant&) = default;
};

// Continuous piecewise-linear function through (knots[i], knot_values[i]).
struct PiecewiseLinear {
  Vec knots;
  Vec knot_values;
};

void validate(const PiecewiseConstant& g);

// (T g)(x) = int_0^x g. The knots are the breaks of g with 0 inserted.
PiecewiseLinear integrate_from_zero(const PiecewiseConstant& g);

// Slopes of F on each piece; the inverse of integrate_from_zero.
PiecewiseConstant differentiate(const PiecewiseLinear& f);

double sup_norm(const PiecewiseConstant& g);
double lip_constant(const PiecewiseLinear& f);
double evaluate(const PiecewiseLinear& f, double x);
double evaluate(const PiecewiseConstant& g, double x);

// max over pieces of the refined partition of |a - b|.
double max_difference(const PiecewiseConstant& a, const PiecewiseConstant& b);

}  // namespace lipfree
