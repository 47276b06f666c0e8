#include "lipfree/operator_t.hpp"

#include <cmath>
#include <string>

#include "lipfree/error.hpp"

namespace lipfree {

VectorField::VectorField(std::size_t dim, Evaluator evaluator, std::optional<double> bound)
    : dim_(dim), evaluator_(std::move(evaluator)), bound_(bound) {
  if (dim_ == 0) throw InvalidInput("vector field needs a positive dimension");
  if (!evaluator_) throw InvalidInput("vector field needs an evaluator");
  if (bound_ && !(*bound_ >= 0.0)) throw InvalidInput("declared field bound must be nonnegative");
}

Vec VectorField::operator()(std::span<const double> p) const {
  Vec value = evaluator_(p);
  if (value.size() != dim_) throw InvalidInput("vector field evaluator returned a covector of the wrong dimension");
  for (double v : value) {
    if (!std::isfinite(v)) throw InvalidInput("vector field evaluator returned a non-finite value");
  }
  return value;
}

double sampled_sup_norm(const VectorField& g, const NormSpec& norm, std::span<const Vec> points, Exec exec) {
  const ArgMax best = kernels::max_over(points.size(), [&](std::size_t i) { return norm.dual_norm(g(points[i])); }, exec);
  return std::max(0.0, best.value);
}

double t_apply(const VectorField& g, std::span<const double> x, std::span<const double> y, int m) {
  if (m < 1) throw InvalidInput("segment quadrature needs m >= 1");
  if (x.size() != g.dim() || y.size() != g.dim()) throw InvalidInput("t_apply: dimension mismatch");
  const std::size_t n = g.dim();
  const Vec d = subtract(y, x);
  Vec p(n);
  double sum = 0.0;
  for (int j = 0; j < m; ++j) {
    const double t = (j + 0.5) / m;
    for (std::size_t k = 0; k < n; ++k) p[k] = x[k] + t * d[k];
    sum += dot(g(p), d);
  }
  return sum / m;
}

double t0_apply(const VectorField& g, std::span<const double> y, int m) {
  const Vec origin(g.dim(), 0.0);
  return t_apply(g, origin, y, m);
}

VectorField gradient(const SampledFunction& f, const ConvexDomain& domain, double step,
                     std::optional<double> declared_bound) {
  if (!(step > 0.0)) throw InvalidInput("gradient step must be positive");
  if (f.dim() != domain.dim()) throw InvalidInput("function and domain dimensions differ");
  const std::size_t n = f.dim();
  auto evaluator = [f, domain, step, n](std::span<const double> x) {
    if (!domain.contains(x)) throw InvalidInput("gradient evaluated outside the domain");
    Vec grad(n);
    Vec e(n, 0.0);
    Vec probe(x.begin(), x.end());
    std::optional<double> fx;
    for (std::size_t k = 0; k < n; ++k) {
      e[k] = 1.0;
      const double forward = domain.exit_time(x, e);
      e[k] = -1.0;
      const double backward = domain.exit_time(x, e);
      e[k] = 0.0;
      if (forward > step && backward > step) {
        probe[k] = x[k] + step;
        const double up = f(probe);
        probe[k] = x[k] - step;
        const double down = f(probe);
        grad[k] = (up - down) / (2.0 * step);
      } else {
        if (!fx) fx = f(x);
        const double s = forward >= backward ? std::min(step, 0.5 * forward) : -std::min(step, 0.5 * backward);
        probe[k] = x[k] + s;
        grad[k] = (f(probe) - *fx) / s;
      }
      probe[k] = x[k];
    }
    return grad;
  };
  return VectorField(n, std::move(evaluator), declared_bound);
}

VectorField gradient(const SampledFunction& f, const ConvexDomain& domain, const NormSpec& norm, double step,
                     std::size_t surrogate_samples, std::uint64_t seed) {
  const double bound = essential_lip_estimate(f, domain, norm, surrogate_samples, seed);
  return gradient(f, domain, step, bound);
}

std::vector<Vec> sample_points(const ConvexDomain& domain, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> points(count);
  for (auto& p : points) p = domain.sample(rng);
  return points;
}

std::vector<PointPair> sample_pairs(const ConvexDomain& domain, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PointPair> pairs(count);
  for (auto& [x, y] : pairs) {
    do {
      x = domain.sample(rng);
      y = domain.sample(rng);
    } while (x == y);
  }
  return pairs;
}

CompatReport compat_residual(const VectorField& g, const ConvexDomain& domain, std::span<const PointPair> pairs, int m,
                             const NormSpec& norm, Exec exec) {
  for (const auto& [x, y] : pairs) {
    if (!domain.contains(x) || !domain.contains(y)) throw InvalidInput("compatibility pair lies outside the domain");
    if (x == y) throw InvalidInput("compatibility pairs need x != y");
  }
  const ArgMax worst = kernels::max_over(
      pairs.size(),
      [&](std::size_t i) {
        const auto& [x, y] = pairs[i];
        const double defect = t0_apply(g, y, m) - t0_apply(g, x, m) - t_apply(g, x, y, m);
        return std::abs(defect) / norm.norm(subtract(y, x));
      },
      exec);
  CompatReport report;
  report.pairs_tested = pairs.size();
  if (!pairs.empty()) {
    report.max_residual = worst.value;
    report.worst_pair = pairs[worst.index];
  }
  return report;
}

CompatReport compat_residual(const VectorField& g, const ConvexDomain& domain, std::size_t samples, std::uint64_t seed,
                             int m, const NormSpec& norm, Exec exec) {
  const auto pairs = sample_pairs(domain, samples, seed);
  return compat_residual(g, domain, pairs, m, norm, exec);
}

double roundtrip_error(const SampledFunction& f, const ConvexDomain& domain, double step, int m, std::size_t probes,
                       std::uint64_t seed, Exec exec) {
  const VectorField grad = gradient(f, domain, step);
  const auto points = sample_points(domain, probes, seed);
  const ArgMax worst = kernels::max_over(
      points.size(), [&](std::size_t i) { return std::abs(t0_apply(grad, points[i], m) - f(points[i])); }, exec);
  return std::max(0.0, worst.value);
}

SampledFunction mollify(const SampledFunction& f, double eps, const Grid& grid) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("mollifier width must be positive and finite");
  if (f.dim() != grid.dim()) throw InvalidInput("function and grid dimensions differ");
  const std::size_t n = grid.dim();
  const double h = grid.h();
  const int reach = static_cast<int>(std::ceil(eps / h));

  std::vector<Vec> offsets;
  Vec weights;
  std::vector<int> j(n, -reach);
  double mass = 0.0;
  for (;;) {
    double w = 1.0;
    Vec z(n);
    for (std::size_t k = 0; k < n; ++k) {
      z[k] = j[k] * h;
      const double t = z[k] / eps;
      w *= std::abs(t) < 1.0 ? (1.0 - t * t) * (1.0 - t * t) : 0.0;
    }
    if (w > 0.0) {
      offsets.push_back(std::move(z));
      weights.push_back(w);
      mass += w;
    }
    std::size_t k = n;
    while (k-- > 0) {
      if (++j[k] <= reach) break;
      j[k] = -reach;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  for (double& w : weights) w /= mass;

  const ConvexDomain& domain = grid.domain();
  for (const auto& z : offsets) {
    Vec p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = -z[k];
    if (!domain.contains(p)) throw InvalidInput("mollifier width " + std::to_string(eps) + " is too large for the domain");
  }

  auto convolve = [f, domain, offsets, weights, n](std::span<const double> y) {
    Vec p(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) p[k] = y[k] - offsets[i][k];
      if (!domain.contains(p)) throw InvalidInput("mollifier support leaves the domain at this point");
      sum += weights[i] * f(p);
    }
    return sum;
  };
  const double base = convolve(Vec(n, 0.0));
  return SampledFunction(n, [convolve, base](std::span<const double> y) { return convolve(y) - base; });
}

double grid_pairing(const SampledFunction& f, const CellField& field, Exec exec) {
  const Grid& grid = *field.grid;
  const std::size_t n = grid.dim();
  if (field.values.size() != grid.cell_count() * n) throw InvalidInput("cell field has the wrong number of values");
  const double h = grid.h();
  const double volume = grid.cell_volume();
  return kernels::ordered_sum(
      grid.cell_count(),
      [&](std::size_t c) {
        const auto value = field.at(c);
        const auto center = grid.center(c);
        Vec probe(center.begin(), center.end());
        double term = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (value[k] == 0.0) continue;
          probe[k] = center[k] + 0.5 * h;
          const double up = f(probe);
          probe[k] = center[k] - 0.5 * h;
          const double down = f(probe);
          probe[k] = center[k];
          term += (up - down) / h * value[k];
        }
        return term * volume;
      },
      exec);
}

Vec mollify_pairing_test(const SampledFunction& f, const CellField& field, std::span<const double> eps_sequence,
                         Exec exec) {
  Vec pairings;
  for (double eps : eps_sequence) pairings.push_back(grid_pairing(mollify(f, eps, *field.grid), field, exec));
  return pairings;
}

}  // namespace lipfree
