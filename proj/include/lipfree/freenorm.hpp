#pragma once

#include <cstddef>
#include <vector>

#include "lipfree/geometry.hpp"
#include "lipfree/lipcalc.hpp"

namespace lipfree {

struct Atom {
  Vec point;
  double weight = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Finitely supported element sum_i a_i delta(x_i) of the free space: atoms
// nonempty, pairwise distinct, nonzero weights, none at the base point.
class Molecule {
 public:
  explicit Molecule(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  std::size_t dim() const { return atoms_.front().point.size(); }

  Molecule scaled(double factor) const;

 private:
  std::vector<Atom> atoms_;
};

// Merge equal points, drop zero weights and atoms at 0. May return empty.
std::vector<Atom> normalize_atoms(std::vector<Atom> atoms);

// normalize_atoms plus membership in U. Throws InvalidInput when an atom
// lies outside U or nothing remains.
Molecule molecule_validate(std::vector<Atom> atoms, const ConvexDomain& domain);

struct KRResult {
  double value = 0.0;
  PointData witness;  // base point first, then the atoms in order
};

// max sum a_i f_i over f_0 = 0, |f_i - f_j| <= ||x_i - x_j||.
KRResult kr_dual_norm(const Molecule& mu, const NormSpec& norm);

inline constexpr std::size_t kBruteForceMaxAtoms = 4;

// Same LP by enumerating every basic solution. Throws InvalidInput above
// kBruteForceMaxAtoms atoms.
double kr_brute_small(const Molecule& mu, const NormSpec& norm);

}  // namespace lipfree
