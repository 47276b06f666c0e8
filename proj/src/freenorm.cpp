#include "lipfree/freenorm.hpp"

#include <algorithm>
#include <cmath>

#include "lipfree/error.hpp"
#include "lipfree/lp_core.hpp"

namespace lipfree {
namespace {

bool is_origin(const Vec& p) {
  return std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; });
}

// Rows of the pairwise Lipschitz LP over the support plus the base point,
// written as coefficients . f <= rhs.
std::vector<LinearConstraint> lipschitz_rows(const Molecule& mu, const NormSpec& norm) {
  const auto& atoms = mu.atoms();
  const std::size_t k = atoms.size();
  std::vector<LinearConstraint> rows;
  for (std::size_t i = 0; i < k; ++i) {
    const double d = norm.norm(atoms[i].point);
    Vec up(k, 0.0);
    up[i] = 1.0;
    Vec down(k, 0.0);
    down[i] = -1.0;
    rows.push_back({up, Relation::LessEqual, d});
    rows.push_back({down, Relation::LessEqual, d});
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double d = norm.norm(subtract(atoms[i].point, atoms[j].point));
      Vec forward(k, 0.0);
      forward[i] = 1.0;
      forward[j] = -1.0;
      Vec backward(k, 0.0);
      backward[i] = -1.0;
      backward[j] = 1.0;
      rows.push_back({forward, Relation::LessEqual, d});
      rows.push_back({backward, Relation::LessEqual, d});
    }
  }
  return rows;
}

// Solves the square system by Gaussian elimination with partial pivoting.
bool solve_square(std::vector<Vec> a, Vec b, Vec& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return true;
}

}  // namespace

Molecule::Molecule(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidInput("molecule needs at least one atom");
  const std::size_t n = atoms_.front().point.size();
  if (n == 0) throw InvalidInput("atom points need a positive dimension");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (a.point.size() != n) throw InvalidInput("atoms have inconsistent dimensions");
    if (!std::isfinite(a.weight) || a.weight == 0.0) throw InvalidInput("atom weights must be finite and nonzero");
    for (double v : a.point) {
      if (!std::isfinite(v)) throw InvalidInput("atom point has a non-finite coordinate");
    }
    if (is_origin(a.point)) throw InvalidInput("atom at the base point");
    for (std::size_t j = 0; j < i; ++j) {
      if (atoms_[j].point == a.point) throw InvalidInput("atoms must have distinct points");
    }
  }
}

Molecule Molecule::scaled(double factor) const {
  if (!std::isfinite(factor) || factor == 0.0) throw InvalidInput("scaling factor must be finite and nonzero");
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.weight *= factor;
  return Molecule(std::move(atoms));
}

std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
  std::vector<Atom> merged;
  for (auto& a : atoms) {
    if (!merged.empty() && a.point.size() != merged.front().point.size()) {
      throw InvalidInput("atoms have inconsistent dimensions");
    }
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Atom& m) { return m.point == a.point; });
    if (it != merged.end()) {
      it->weight += a.weight;
    } else {
      merged.push_back(std::move(a));
    }
  }
  std::erase_if(merged, [](const Atom& a) { return a.weight == 0.0 || is_origin(a.point); });
  return merged;
}

Molecule molecule_validate(std::vector<Atom> atoms, const ConvexDomain& domain) {
  for (const auto& a : atoms) {
    if (a.point.size() != domain.dim()) throw InvalidInput("atom dimension does not match the domain");
    if (!domain.contains(a.point)) throw InvalidInput("atom lies outside the domain");
  }
  auto normalized = normalize_atoms(std::move(atoms));
  if (normalized.empty()) throw InvalidInput("molecule is the zero element after normalization");
  return Molecule(std::move(normalized));
}

KRResult kr_dual_norm(const Molecule& mu, const NormSpec& norm) {
  const auto& atoms = mu.atoms();
  const std::size_t k = atoms.size();
  LPProblem lp(k);
  for (std::size_t i = 0; i < k; ++i) {
    lp.objective[i] = atoms[i].weight;
    lp.lower[i] = -kInf;
  }
  lp.constraints = lipschitz_rows(mu, norm);
  const LPSolution sol = lp_solve(lp);
  if (sol.status != LPStatus::Optimal) throw InfeasibleProblem("free-norm LP did not reach an optimum");

  KRResult result;
  result.value = std::max(0.0, sol.value);
  result.witness.points.push_back(Vec(mu.dim(), 0.0));
  result.witness.values.push_back(0.0);
  for (std::size_t i = 0; i < k; ++i) {
    result.witness.points.push_back(atoms[i].point);
    result.witness.values.push_back(sol.primal[i]);
  }
  return result;
}

double kr_brute_small(const Molecule& mu, const NormSpec& norm) {
  const std::size_t k = mu.size();
  if (k > kBruteForceMaxAtoms) throw InvalidInput("vertex enumeration supports at most 4 atoms");
  const auto rows = lipschitz_rows(mu, norm);
  double scale = 1.0;
  for (const auto& r : rows) scale = std::max(scale, r.rhs);
  const double tol = 1e-9 * scale;

  double best = -kInf;
  std::vector<int> pick(rows.size(), 0);
  std::fill(pick.end() - static_cast<long>(k), pick.end(), 1);
  do {
    std::vector<Vec> a;
    Vec b;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!pick[r]) continue;
      a.push_back(rows[r].coefficients);
      b.push_back(rows[r].rhs);
    }
    Vec f;
    if (!solve_square(a, b, f)) continue;
    const bool feasible = std::all_of(rows.begin(), rows.end(),
                                      [&](const LinearConstraint& r) { return dot(r.coefficients, f) <= r.rhs + tol; });
    if (!feasible) continue;
    double value = 0.0;
    for (std::size_t i = 0; i < k; ++i) value += mu.atoms()[i].weight * f[i];
    best = std::max(best, value);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return std::max(0.0, best);
}

}  // namespace lipfree
