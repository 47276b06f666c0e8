#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lipfree/geometry.hpp"
#include "lipfree/grid.hpp"
#include "lipfree/kernels.hpp"

namespace lipfree {

// Real-valued function on U vanishing at the base point. The evaluator must
// be safe to call concurrently.
class SampledFunction {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  // Throws InvalidInput unless |f(0)| <= 1e-12.
  SampledFunction(std::size_t dim, Evaluator evaluator);

  double operator()(std::span<const double> p) const { return evaluator_(p); }
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  Evaluator evaluator_;
};

// Finite restriction of a function; contains the base point with value 0.
struct PointData {
  std::vector<Vec> points;
  Vec values;

  friend bool operator==(const PointData&, const PointData&) = default;
};

// Throws InvalidInput on ragged data, duplicate points, or a missing base point.
void validate_point_data(const PointData& data);

double lip_constant_finite(const PointData& data, const NormSpec& norm, Exec exec = Exec::Parallel);

// h(y) = min_i (f_i + L ||y - x_i||).
SampledFunction mcshane_extend(const PointData& data, double lipschitz, const NormSpec& norm);

// Max difference quotient over `samples` independent uniform pairs of U x U.
double essential_lip_estimate(const SampledFunction& f, const ConvexDomain& domain,
                              const NormSpec& norm, std::size_t samples, std::uint64_t seed,
                              Exec exec = Exec::Parallel);

// Exhaustive variant over all pairs of grid cell centers.
double essential_lip_grid(const SampledFunction& f, const Grid& grid, const NormSpec& norm,
                          Exec exec = Exec::Parallel);

}  // namespace lipfree
