#include "lipfree/lipcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lipfree/error.hpp"

namespace lipfree {

SampledFunction::SampledFunction(std::size_t dim, Evaluator evaluator) : dim_(dim), evaluator_(std::move(evaluator)) {
  if (dim_ == 0) throw InvalidInput("sampled function needs a positive dimension");
  if (!evaluator_) throw InvalidInput("sampled function needs an evaluator");
  const Vec origin(dim_, 0.0);
  const double f0 = evaluator_(origin);
  if (!(std::abs(f0) <= 1e-12)) throw InvalidInput("sampled function must vanish at the base point, got " + std::to_string(f0));
}

void validate_point_data(const PointData& data) {
  if (data.points.size() != data.values.size()) throw InvalidInput("point data needs one value per point");
  if (data.points.empty()) throw InvalidInput("point data is empty");
  const std::size_t n = data.points.front().size();
  bool has_origin = false;
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    const Vec& p = data.points[i];
    if (p.size() != n || n == 0) throw InvalidInput("point data points must share one positive dimension");
    if (!std::isfinite(data.values[i])) throw InvalidInput("point data values must be finite");
    if (std::all_of(p.begin(), p.end(), [](double x) { return x == 0.0; })) {
      if (data.values[i] != 0.0) throw InvalidInput("point data must give the base point the value 0");
      has_origin = true;
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (data.points[j] == p) throw InvalidInput("point data contains duplicate points");
    }
  }
  if (!has_origin) throw InvalidInput("point data must contain the base point 0");
}

double lip_constant_finite(const PointData& data, const NormSpec& norm, Exec exec) {
  validate_point_data(data);
  const std::size_t k = data.points.size();
  if (k < 2) throw InvalidInput("the Lipschitz constant needs at least two points");
  const ArgMax best = kernels::max_over(
      k,
      [&](std::size_t i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < k; ++j) {
          const double d = norm.norm(subtract(data.points[i], data.points[j]));
          row = std::max(row, std::abs(data.values[i] - data.values[j]) / d);
        }
        return row;
      },
      exec);
  return best.value;
}

SampledFunction mcshane_extend(const PointData& data, double lipschitz, const NormSpec& norm) {
  validate_point_data(data);
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) throw InvalidInput("extension constant must be finite and nonnegative");
  if (data.points.size() >= 2) {
    const double needed = lip_constant_finite(data, norm, Exec::Serial);
    if (lipschitz < needed * (1.0 - 1e-12)) {
      throw InvalidInput("extension constant " + std::to_string(lipschitz) + " is below the data's Lipschitz constant " +
                         std::to_string(needed));
    }
  }
  const std::size_t n = data.points.front().size();
  return SampledFunction(n, [data, lipschitz, norm](std::span<const double> y) {
    // At a data point the minimum is its own value; rounding in the other
    // terms must not undercut it.
    for (std::size_t i = 0; i < data.points.size(); ++i) {
      if (std::equal(y.begin(), y.end(), data.points[i].begin(), data.points[i].end())) return data.values[i];
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < data.points.size(); ++i) {
      best = std::min(best, data.values[i] + lipschitz * norm.norm(subtract(y, data.points[i])));
    }
    return best;
  });
}

double essential_lip_estimate(const SampledFunction& f, const ConvexDomain& domain, const NormSpec& norm,
                              std::size_t samples, std::uint64_t seed, Exec exec) {
  if (samples < 1) throw InvalidInput("essential Lipschitz estimate needs at least one sample");
  if (f.dim() != domain.dim()) throw InvalidInput("function and domain dimensions differ");
  std::mt19937_64 rng(seed);
  std::vector<Vec> xs(samples), ys(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    do {
      xs[s] = domain.sample(rng);
      ys[s] = domain.sample(rng);
    } while (xs[s] == ys[s]);
  }
  const ArgMax best = kernels::max_over(
      samples,
      [&](std::size_t s) { return std::abs(f(ys[s]) - f(xs[s])) / norm.norm(subtract(ys[s], xs[s])); }, exec);
  return best.value;
}

double essential_lip_grid(const SampledFunction& f, const Grid& grid, const NormSpec& norm, Exec exec) {
  const std::size_t cells = grid.cell_count();
  Vec values(cells);
  kernels::for_each_index(cells, [&](std::size_t c) { values[c] = f(grid.center(c)); }, exec);
  const ArgMax best = kernels::max_over(
      cells,
      [&](std::size_t i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < cells; ++j) {
          row = std::max(row, std::abs(values[i] - values[j]) / norm.norm(subtract(grid.center(i), grid.center(j))));
        }
        return row;
      },
      exec);
  return std::max(0.0, best.value);
}

}  // namespace lipfree
