#include <doctest.h>

#include <cmath>
#include <random>

#include "lipfree/error.hpp"
#include "lipfree/freenorm.hpp"

using namespace lipfree;

namespace {

const ConvexDomain kBox = ConvexDomain::box({-2, -2}, {2, 2});

std::vector<NormSpec> all_norms() {
  return {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(), NormSpec::regular_polygon(12)};
}

Molecule random_molecule(std::mt19937_64& rng, std::size_t atoms) {
  std::uniform_real_distribution<double> u(-1.9, 1.9);
  std::uniform_real_distribution<double> w(-2.0, 2.0);
  std::vector<Atom> list;
  for (std::size_t i = 0; i < atoms; ++i) list.push_back({{u(rng), u(rng)}, w(rng)});
  return Molecule(list);
}

}  // namespace

TEST_CASE("free norm examples") {
  const auto l2 = NormSpec::l2();
  const auto r = kr_dual_norm(Molecule({{{3, 4}, 1.0}}), l2);
  CHECK(r.value == doctest::Approx(5.0).epsilon(1e-12));
  REQUIRE(r.witness.points.size() == 2);
  CHECK(r.witness.points[0] == Vec{0, 0});
  CHECK(r.witness.values[1] == doctest::Approx(5.0));

  CHECK(kr_dual_norm(Molecule({{{1, 0}, 1.0}, {{0, 1}, 1.0}}), l2).value == doctest::Approx(2.0));
  const Molecule dipole({{{1, 0}, 1.0}, {{0, 1}, -1.0}});
  CHECK(kr_dual_norm(dipole, l2).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(kr_brute_small(dipole, l2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("brute force examples") {
  const auto l2 = NormSpec::l2();
  const Vec x = {1.5, 0.2};
  const Vec y = {-0.3, 0.9};
  const double a = -1.7;
  const double expected = std::abs(a) * std::min(l2.norm(subtract(x, y)), l2.norm(x) + l2.norm(y));
  CHECK(kr_brute_small(Molecule({{x, a}, {y, -a}}), l2) == doctest::Approx(expected).epsilon(1e-12));
  const Vec far = {1.9, 1.9};
  const Vec far2 = {-1.9, -1.9};
  const double e2 = std::abs(a) * std::min(l2.norm(subtract(far, far2)), l2.norm(far) + l2.norm(far2));
  CHECK(kr_brute_small(Molecule({{far, a}, {far2, -a}}), l2) == doctest::Approx(e2).epsilon(1e-12));
  CHECK(kr_brute_small(Molecule({{x, 2.5}}), l2) == doctest::Approx(2.5 * l2.norm(x)));
  const Molecule mu({{x, 1.0}, {y, 0.5}, {{0.4, -1.2}, -2.0}});
  CHECK(kr_brute_small(mu.scaled(2.0), l2) == doctest::Approx(2 * kr_brute_small(mu, l2)).epsilon(1e-12));
  std::vector<Atom> five;
  for (int i = 1; i <= 5; ++i) five.push_back({{0.1 * i, 0.0}, 1.0});
  CHECK_THROWS_AS(kr_brute_small(Molecule(five), l2), InvalidInput);
}

TEST_CASE("molecule validation") {
  const Vec x = {0.5, 0.5};
  CHECK_THROWS_AS(molecule_validate({{x, 1.0}, {x, -1.0}}, kBox), InvalidInput);
  const auto dropped = molecule_validate({{{0, 0}, 5.0}, {x, 1.0}}, kBox);
  REQUIRE(dropped.size() == 1);
  CHECK(dropped.atoms()[0].point == x);
  const auto merged = molecule_validate({{x, 1.0}, {x, 2.0}}, kBox);
  REQUIRE(merged.size() == 1);
  CHECK(merged.atoms()[0].weight == 3.0);
  CHECK_THROWS_AS(molecule_validate({{{3, 0}, 1.0}}, kBox), InvalidInput);
  CHECK_THROWS_AS(Molecule({}), InvalidInput);
  CHECK_THROWS_AS(Molecule({{x, 0.0}}), InvalidInput);
  CHECK_THROWS_AS(Molecule({{{0, 0}, 1.0}}), InvalidInput);
  CHECK_THROWS_AS(Molecule({{x, 1.0}, {x, 1.0}}), InvalidInput);
  CHECK(normalize_atoms({{{0, 0}, 1.0}}).empty());
}

TEST_CASE("delta isometry") {
  std::mt19937_64 rng(10);
  for (const auto& norm : all_norms()) {
    for (int s = 0; s < 100; ++s) {
      const Vec x = kBox.sample(rng);
      CHECK(std::abs(kr_dual_norm(Molecule({{x, 1.0}}), norm).value - norm.norm(x)) <= 1e-9);
    }
  }
}

TEST_CASE("norm axioms on molecules") {
  std::mt19937_64 rng(11);
  for (const auto& norm : all_norms()) {
    for (int s = 0; s < 30; ++s) {
      const Molecule mu = random_molecule(rng, 1 + rng() % 5);
      const Molecule nu = random_molecule(rng, 1 + rng() % 5);
      const double lambda = -3.0 + 0.2 * (rng() % 30) + 0.01;
      const double a = kr_dual_norm(mu, norm).value;
      CHECK(std::abs(kr_dual_norm(mu.scaled(lambda), norm).value - std::abs(lambda) * a) <= 1e-9 * (1 + a));
      std::vector<Atom> sum = mu.atoms();
      sum.insert(sum.end(), nu.atoms().begin(), nu.atoms().end());
      const auto normalized = normalize_atoms(sum);
      const double joint = normalized.empty() ? 0.0 : kr_dual_norm(Molecule(normalized), norm).value;
      CHECK(joint <= a + kr_dual_norm(nu, norm).value + 1e-9);
    }
  }
}

TEST_CASE("LP agrees with vertex enumeration") {
  std::mt19937_64 rng(12);
  for (const auto& norm : all_norms()) {
    for (int s = 0; s < 40; ++s) {
      const Molecule mu = random_molecule(rng, 1 + rng() % 4);
      CHECK(std::abs(kr_dual_norm(mu, norm).value - kr_brute_small(mu, norm)) <= 1e-9);
    }
  }
}

TEST_CASE("witness is 1-Lipschitz and norming") {
  std::mt19937_64 rng(13);
  for (const auto& norm : all_norms()) {
    for (int s = 0; s < 30; ++s) {
      const Molecule mu = random_molecule(rng, 2 + rng() % 5);
      const auto r = kr_dual_norm(mu, norm);
      CHECK(lip_constant_finite(r.witness, norm) <= 1 + 1e-9);
      double pairing = 0.0;
      for (std::size_t i = 0; i < mu.size(); ++i) pairing += mu.atoms()[i].weight * r.witness.values[i + 1];
      CHECK(std::abs(pairing - r.value) <= 1e-9 * (1 + r.value));
      CHECK(r.witness.values[0] == 0.0);
    }
  }
}

TEST_CASE("value does not depend on the domain") {
  std::mt19937_64 rng(14);
  const auto inner = ConvexDomain::ball({0, 0}, 1.0);
  for (int s = 0; s < 20; ++s) {
    std::vector<Atom> atoms;
    for (int i = 0; i < 3; ++i) atoms.push_back({inner.sample(rng), 1.0 - i});
    const auto a = molecule_validate(atoms, inner);
    const auto b = molecule_validate(atoms, kBox);
    CHECK(kr_dual_norm(a, NormSpec::l2()).value == kr_dual_norm(b, NormSpec::l2()).value);
  }
}
