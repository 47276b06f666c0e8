#include "lipfree/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lipfree/error.hpp"
#include "lipfree/lp_core.hpp"

namespace lipfree {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec subtract(std::span<const double> a, std::span<const double> b) {
  Vec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

double euclidean_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidInput(std::string(what) + " must be finite");
  }
}

}  // namespace

ConvexDomain ConvexDomain::box(Vec lo, Vec hi) {
  if (lo.empty() || lo.size() != hi.size()) throw InvalidInput("box bounds must have equal positive dimension");
  require_finite(lo, "box lower corner");
  require_finite(hi, "box upper corner");
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!(lo[k] < hi[k])) throw InvalidInput("box requires lo < hi componentwise");
    if (!(lo[k] < 0.0 && 0.0 < hi[k])) throw InvalidInput("box must contain the base point 0 in its interior");
  }
  const std::size_t n = lo.size();
  Box bbox{lo, hi};
  return ConvexDomain(n, Box{std::move(lo), std::move(hi)}, std::move(bbox));
}

ConvexDomain ConvexDomain::ball(Vec center, double radius) {
  if (center.empty()) throw InvalidInput("ball center must have positive dimension");
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball radius must be positive and finite");
  if (!(euclidean_norm(center) < radius)) throw InvalidInput("ball must contain the base point 0 in its interior");
  Box bbox{center, center};
  for (std::size_t k = 0; k < center.size(); ++k) {
    bbox.lo[k] -= radius;
    bbox.hi[k] += radius;
  }
  const std::size_t n = center.size();
  return ConvexDomain(n, Ball{std::move(center), radius}, std::move(bbox));
}

ConvexDomain ConvexDomain::polytope(std::vector<Halfspace> halfspaces) {
  if (halfspaces.empty()) throw InvalidInput("polytope needs at least one halfspace");
  const std::size_t n = halfspaces.front().normal.size();
  if (n == 0) throw InvalidInput("polytope normals must have positive dimension");
  for (const auto& hs : halfspaces) {
    if (hs.normal.size() != n) throw InvalidInput("polytope normals must share one dimension");
    require_finite(hs.normal, "halfspace normal");
    if (!std::isfinite(hs.offset)) throw InvalidInput("halfspace offset must be finite");
    if (!(hs.offset > 0.0)) throw InvalidInput("every halfspace must hold strictly at the base point 0");
  }
  // Bounding box from 2n linear programs over the closed polytope.
  Box bbox{Vec(n), Vec(n)};
  for (std::size_t k = 0; k < n; ++k) {
    for (int sign : {1, -1}) {
      LPProblem lp(n);
      for (std::size_t j = 0; j < n; ++j) {
        lp.lower[j] = -kInf;
        lp.upper[j] = kInf;
      }
      lp.objective[k] = sign;
      for (const auto& hs : halfspaces) lp.add(hs.normal, Relation::LessEqual, hs.offset);
      const LPSolution sol = lp_solve(lp);
      if (sol.status == LPStatus::Unbounded) throw InvalidInput("polytope is unbounded; only bounded domains are supported");
      if (sol.status != LPStatus::Optimal) throw InvalidInput("polytope bounding box could not be computed");
      if (sign > 0) {
        bbox.hi[k] = sol.value;
      } else {
        bbox.lo[k] = -sol.value;
      }
    }
  }
  return ConvexDomain(n, Polytope{std::move(halfspaces)}, std::move(bbox));
}

bool ConvexDomain::contains(std::span<const double> p) const {
  if (p.size() != dim_) {
    throw InvalidInput("point of dimension " + std::to_string(p.size()) + " tested against a domain of dimension " +
                       std::to_string(dim_));
  }
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) {
          for (std::size_t k = 0; k < dim_; ++k) {
            if (!(s.lo[k] < p[k] && p[k] < s.hi[k])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<S, Ball>) {
          double r2 = 0.0;
          for (std::size_t k = 0; k < dim_; ++k) r2 += (p[k] - s.center[k]) * (p[k] - s.center[k]);
          return r2 < s.radius * s.radius;
        } else {
          for (const auto& hs : s.halfspaces) {
            if (!(dot(hs.normal, p) < hs.offset)) return false;
          }
          return true;
        }
      },
      shape_);
}

double ConvexDomain::exit_time(std::span<const double> p, std::span<const double> dir) const {
  if (p.size() != dim_ || dir.size() != dim_) throw InvalidInput("exit_time: dimension mismatch");
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        double t = kInf;
        if constexpr (std::is_same_v<S, Box>) {
          for (std::size_t k = 0; k < dim_; ++k) {
            if (dir[k] > 0.0) t = std::min(t, (s.hi[k] - p[k]) / dir[k]);
            if (dir[k] < 0.0) t = std::min(t, (s.lo[k] - p[k]) / dir[k]);
          }
        } else if constexpr (std::is_same_v<S, Ball>) {
          const Vec q = subtract(p, s.center);
          const double a = dot(dir, dir);
          if (a == 0.0) return kInf;
          const double b = dot(q, dir);
          const double c = dot(q, q) - s.radius * s.radius;
          const double disc = std::max(0.0, b * b - a * c);
          t = std::max(0.0, (-b + std::sqrt(disc)) / a);
        } else {
          for (const auto& hs : s.halfspaces) {
            const double rate = dot(hs.normal, dir);
            if (rate > 0.0) t = std::min(t, std::max(0.0, (hs.offset - dot(hs.normal, p)) / rate));
          }
        }
        return t;
      },
      shape_);
}

double ConvexDomain::diameter() const { return euclidean_norm(subtract(bbox_.hi, bbox_.lo)); }

Vec ConvexDomain::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec p(dim_);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    for (std::size_t k = 0; k < dim_; ++k) p[k] = bbox_.lo[k] + (bbox_.hi[k] - bbox_.lo[k]) * unit(rng);
    if (contains(p)) return p;
  }
  throw InvalidInput("rejection sampling failed: domain occupies a negligible part of its bounding box");
}

std::vector<QuadratureNode> segment_nodes(const ConvexDomain& domain, std::span<const double> x,
                                          std::span<const double> y, int m) {
  if (m < 1) throw InvalidInput("segment quadrature needs m >= 1");
  if (!domain.contains(x)) throw InvalidInput("segment start lies outside the domain");
  if (!domain.contains(y)) throw InvalidInput("segment end lies outside the domain");
  std::vector<QuadratureNode> nodes(static_cast<std::size_t>(m));
  const double weight = 1.0 / m;
  for (int j = 0; j < m; ++j) {
    const double t = (j + 0.5) / m;
    Vec p(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) p[k] = x[k] + t * (y[k] - x[k]);
    nodes[static_cast<std::size_t>(j)] = {std::move(p), weight};
  }
  return nodes;
}

}  // namespace lipfree
