#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lipfree/error.hpp"
#include "lipfree/geometry.hpp"
#include "lipfree/lp_core.hpp"

namespace lipfree {

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Linf: return "linf";
    case NormKind::Polyhedral: return "polyhedral";
  }
  return "unknown";
}

namespace {

double cross(std::span<const double> o, std::span<const double> a, std::span<const double> b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Facets of conv(points) for a 2D point set containing 0 in its interior.
std::vector<Vec> polygon_facets(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Vec> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  std::vector<Vec> facets;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec& p = hull[i];
    const Vec& q = hull[(i + 1) % hull.size()];
    const double det = p[0] * q[1] - p[1] * q[0];
    if (!(det > 1e-14)) throw InvalidInput("polyhedral directions must surround the origin");
    facets.push_back({(q[1] - p[1]) / det, (p[0] - q[0]) / det});
  }
  return facets;
}

// max <u, v> over {u : <u, d> <= 1 for all d in D}.
double gauge_by_lp(const std::vector<Vec>& directions, std::span<const double> v) {
  const std::size_t n = v.size();
  LPProblem lp(n);
  for (std::size_t j = 0; j < n; ++j) {
    lp.objective[j] = v[j];
    lp.lower[j] = -kInf;
  }
  for (const auto& d : directions) lp.add(d, Relation::LessEqual, 1.0);
  const LPSolution sol = lp_solve(lp);
  if (sol.status != LPStatus::Optimal) throw InvalidInput("polyhedral directions do not span the space");
  return std::max(0.0, sol.value);
}

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != 0 && expected != got) {
    throw InvalidInput("norm evaluated on a vector of dimension " + std::to_string(got) +
                       " but its directions have dimension " + std::to_string(expected));
  }
}

}  // namespace

NormSpec NormSpec::polyhedral(std::vector<Vec> directions) {
  const std::size_t k = directions.size();
  if (k < 4 || k % 2 != 0) throw InvalidInput("polyhedral norm needs an even number k >= 4 of directions");
  const std::size_t n = directions.front().size();
  if (n < 2) throw InvalidInput("polyhedral norms need dimension >= 2");
  for (const auto& d : directions) {
    if (d.size() != n) throw InvalidInput("polyhedral directions must share one dimension");
    for (double x : d) {
      if (!std::isfinite(x)) throw InvalidInput("polyhedral directions must be finite");
    }
    if (euclidean_norm(d) == 0.0) throw InvalidInput("polyhedral directions must be nonzero");
  }
  for (const auto& d : directions) {
    const bool mirrored = std::any_of(directions.begin(), directions.end(), [&](const Vec& e) {
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(d[i] + e[i]));
      return err <= 1e-12 * (1.0 + euclidean_norm(d));
    });
    if (!mirrored) throw InvalidInput("polyhedral direction set must be symmetric (d in D implies -d in D)");
  }
  NormSpec spec(NormKind::Polyhedral);
  spec.directions_ = std::move(directions);
  if (n == 2) {
    spec.facets_ = polygon_facets(spec.directions_);
  } else {
    for (std::size_t axis = 0; axis < n; ++axis) {
      Vec e(n, 0.0);
      e[axis] = 1.0;
      gauge_by_lp(spec.directions_, e);
    }
  }
  return spec;
}

NormSpec NormSpec::regular_polygon(int k) {
  if (k < 4 || k % 2 != 0) throw InvalidInput("regular polygon needs an even k >= 4");
  std::vector<Vec> dirs;
  for (int j = 0; j < k; ++j) {
    const double angle = 2.0 * std::numbers::pi * j / k;
    dirs.push_back({std::cos(angle), std::sin(angle)});
  }
  // Exact antipodes.
  for (int j = k / 2; j < k; ++j) dirs[j] = {-dirs[j - k / 2][0], -dirs[j - k / 2][1]};
  return polyhedral(std::move(dirs));
}

double NormSpec::norm(std::span<const double> v) const {
  switch (kind_) {
    case NormKind::L1: {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      return s;
    }
    case NormKind::L2: return euclidean_norm(v);
    case NormKind::Linf: {
      double s = 0.0;
      for (double x : v) s = std::max(s, std::abs(x));
      return s;
    }
    case NormKind::Polyhedral: {
      check_dim(directions_.front().size(), v.size());
      if (!facets_.empty()) {
        double s = 0.0;
        for (const auto& f : facets_) s = std::max(s, dot(f, v));
        return s;
      }
      return gauge_by_lp(directions_, v);
    }
  }
  return 0.0;
}

double NormSpec::dual_norm(std::span<const double> u) const {
  switch (kind_) {
    case NormKind::L1: return NormSpec::linf().norm(u);
    case NormKind::L2: return euclidean_norm(u);
    case NormKind::Linf: return NormSpec::l1().norm(u);
    case NormKind::Polyhedral: {
      check_dim(directions_.front().size(), u.size());
      double s = 0.0;
      for (const auto& d : directions_) s = std::max(s, dot(u, d));
      return s;
    }
  }
  return 0.0;
}

Vec NormSpec::extremal(std::span<const double> u) const {
  const std::size_t n = u.size();
  Vec v(n, 0.0);
  switch (kind_) {
    case NormKind::L1: {
      std::size_t best = 0;
      for (std::size_t k = 1; k < n; ++k) {
        if (std::abs(u[k]) > std::abs(u[best])) best = k;
      }
      v[best] = u[best] < 0.0 ? -1.0 : 1.0;
      return v;
    }
    case NormKind::L2: {
      const double r = euclidean_norm(u);
      if (r == 0.0) {
        v[0] = 1.0;
        return v;
      }
      for (std::size_t k = 0; k < n; ++k) v[k] = u[k] / r;
      return v;
    }
    case NormKind::Linf: {
      for (std::size_t k = 0; k < n; ++k) v[k] = u[k] < 0.0 ? -1.0 : 1.0;
      return v;
    }
    case NormKind::Polyhedral: {
      check_dim(directions_.front().size(), n);
      const Vec* best = &directions_.front();
      for (const auto& d : directions_) {
        if (dot(u, d) > dot(u, *best)) best = &d;
      }
      const double r = norm(*best);
      for (std::size_t k = 0; k < n; ++k) v[k] = (*best)[k] / r;
      return v;
    }
  }
  return v;
}

}  // namespace lipfree
