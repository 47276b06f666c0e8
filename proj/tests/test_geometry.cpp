#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "lipfree/error.hpp"
#include "lipfree/geometry.hpp"
#include "lipfree/grid.hpp"

using namespace lipfree;

namespace {

std::vector<ConvexDomain> sample_domains() {
  return {
      ConvexDomain::box({-1.0, -2.0}, {1.5, 0.5}),
      ConvexDomain::ball({0.2, -0.1}, 1.0),
      ConvexDomain::polytope({{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}, {{-1.0, -1.0}, 0.5}}),
  };
}

// Gauge of conv(D) for a symmetric 2D set: cheapest representation of v on
// a pair of directions (a vertex of min sum |lambda| s.t. sum lambda d = v).
double polygon_gauge_oracle(const std::vector<Vec>& dirs, const Vec& v) {
  double best = INFINITY;
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    for (std::size_t b = a + 1; b < dirs.size(); ++b) {
      const double det = dirs[a][0] * dirs[b][1] - dirs[a][1] * dirs[b][0];
      if (std::abs(det) < 1e-14) continue;
      const double la = (v[0] * dirs[b][1] - v[1] * dirs[b][0]) / det;
      const double lb = (dirs[a][0] * v[1] - dirs[a][1] * v[0]) / det;
      best = std::min(best, std::abs(la) + std::abs(lb));
    }
  }
  return best;
}

std::vector<NormSpec> all_norms() {
  return {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(), NormSpec::regular_polygon(8),
          NormSpec::polyhedral({{1, 0}, {-1, 0}, {0.6, 0.8}, {-0.6, -0.8}})};
}

}  // namespace

TEST_CASE("contains examples") {
  CHECK(ConvexDomain::box({-1, -1}, {1, 1}).contains(Vec{0, 0}));
  CHECK_FALSE(ConvexDomain::ball({0, 0}, 1).contains(Vec{1, 0}));
  CHECK(ConvexDomain::box({-2}, {2}).contains(Vec{1.5}));
  CHECK_FALSE(ConvexDomain::box({-2}, {2}).contains(Vec{2.0}));
  CHECK_THROWS_AS(ConvexDomain::box({-1, -1}, {1, 1}).contains(Vec{0}), InvalidInput);
}

TEST_CASE("domain constructors reject bad input") {
  CHECK_THROWS_AS(ConvexDomain::box({0.0}, {1.0}), InvalidInput);
  CHECK_THROWS_AS(ConvexDomain::box({-1.0}, {-INFINITY}), InvalidInput);
  CHECK_THROWS_AS(ConvexDomain::ball({2.0, 0.0}, 1.0), InvalidInput);
  CHECK_THROWS_AS(ConvexDomain::polytope({{{1.0, 0.0}, 1.0}}), InvalidInput);
  CHECK_THROWS_AS(ConvexDomain::polytope({{{1.0, 0.0}, -1.0}, {{-1.0, 0.0}, 2.0}}), InvalidInput);
}

TEST_CASE("polytope bounding box") {
  const auto tri = ConvexDomain::polytope({{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}, {{-1.0, -1.0}, 0.5}});
  const Box& b = tri.bounding_box();
  CHECK(b.lo[0] == doctest::Approx(-1.5));
  CHECK(b.lo[1] == doctest::Approx(-1.5));
  CHECK(b.hi[0] == doctest::Approx(1.0));
  CHECK(b.hi[1] == doctest::Approx(1.0));
}

TEST_CASE("segment nodes") {
  const auto box = ConvexDomain::box({-2, -2}, {2, 2});
  auto nodes = segment_nodes(box, Vec{0, 0}, Vec{1, 0}, 2);
  REQUIRE(nodes.size() == 2);
  CHECK(nodes[0].point[0] == 0.25);
  CHECK(nodes[1].point[0] == 0.75);
  CHECK(nodes[0].weight == 0.5);
  CHECK(nodes[1].weight == 0.5);

  nodes = segment_nodes(box, Vec{0.3, 0.4}, Vec{0.3, 0.4}, 5);
  for (const auto& n : nodes) CHECK(n.point == Vec{0.3, 0.4});

  nodes = segment_nodes(box, Vec{-1, 0}, Vec{1, 0}, 4);
  const double ts[] = {0.125, 0.375, 0.625, 0.875};
  for (int j = 0; j < 4; ++j) CHECK(nodes[j].point[0] == doctest::Approx(-1 + 2 * ts[j]).epsilon(1e-15));

  CHECK_THROWS_AS(segment_nodes(box, Vec{0, 0}, Vec{3, 0}, 4), InvalidInput);
  CHECK_THROWS_AS(segment_nodes(box, Vec{0, 0}, Vec{1, 0}, 0), InvalidInput);
}

TEST_CASE("norm examples") {
  CHECK(NormSpec::l2().norm(Vec{3, 4}) == 5.0);
  CHECK(NormSpec::l1().norm(Vec{1, -1}) == 2.0);
  CHECK(NormSpec::l1().dual_norm(Vec{1, -1}) == 1.0);
  CHECK(NormSpec::linf().dual_norm(Vec{1, -1}) == 2.0);
  const auto axes = NormSpec::polyhedral({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  CHECK(axes.norm(Vec{1, 1}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(axes.dual_norm(Vec{1, -3}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(NormSpec::polyhedral({{1, 0}, {0, 1}, {-1, 0}, {0.5, -1}}), InvalidInput);
  CHECK_THROWS_AS(NormSpec::polyhedral({{1, 0}, {-1, 0}}), InvalidInput);
}

TEST_CASE("polyhedral gauge matches pairwise oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, M_PI);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec> dirs;
    const int half = 2 + trial % 5;
    for (int i = 0; i < half; ++i) {
      const double a = angle(rng);
      dirs.push_back({std::cos(a), std::sin(a)});
      dirs.push_back({-std::cos(a), -std::sin(a)});
    }
    const auto norm = NormSpec::polyhedral(dirs);
    for (int s = 0; s < 20; ++s) {
      const Vec v = {gauss(rng), gauss(rng)};
      CHECK(norm.norm(v) == doctest::Approx(polygon_gauge_oracle(dirs, v)).epsilon(1e-9));
    }
  }
}

TEST_CASE("norm axioms and dual pairing") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  for (const auto& norm : all_norms()) {
    for (int s = 0; s < 300; ++s) {
      const Vec u = {gauss(rng), gauss(rng)};
      const Vec v = {gauss(rng), gauss(rng)};
      const Vec w = {gauss(rng), gauss(rng)};
      const Vec vw = {v[0] + w[0], v[1] + w[1]};
      const double lambda = gauss(rng);
      const Vec lv = {lambda * v[0], lambda * v[1]};
      CHECK(norm.norm(v) > 0.0);
      CHECK(norm.norm(lv) == doctest::Approx(std::abs(lambda) * norm.norm(v)).epsilon(1e-12));
      CHECK(norm.norm(vw) <= norm.norm(v) + norm.norm(w) + 1e-12);
      CHECK(dot(u, v) <= norm.dual_norm(u) * norm.norm(v) + 1e-12);
      const Vec e = norm.extremal(u);
      CHECK(norm.norm(e) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(dot(u, e) - norm.dual_norm(u)) <= 1e-12 * (1.0 + norm.dual_norm(u)));
    }
    CHECK(norm.norm(Vec{0, 0}) == 0.0);
  }
}

TEST_CASE("convexity witness") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& domain : sample_domains()) {
    for (int s = 0; s < 1000; ++s) {
      const Vec x = domain.sample(rng);
      const Vec y = domain.sample(rng);
      REQUIRE(domain.contains(x));
      const double t = unit(rng);
      const Vec p = {x[0] + t * (y[0] - x[0]), x[1] + t * (y[1] - x[1])};
      CHECK(domain.contains(p));
    }
  }
}

TEST_CASE("exit time") {
  const auto box = ConvexDomain::box({-1, -2}, {1.5, 0.5});
  CHECK(box.exit_time(Vec{0, 0}, Vec{1, 0}) == doctest::Approx(1.5));
  CHECK(box.exit_time(Vec{0, 0}, Vec{0, -1}) == doctest::Approx(2.0));
  const auto ball = ConvexDomain::ball({0, 0}, 2);
  CHECK(ball.exit_time(Vec{1, 0}, Vec{1, 0}) == doctest::Approx(1.0));
  CHECK(ball.exit_time(Vec{1, 0}, Vec{-1, 0}) == doctest::Approx(3.0));
}

TEST_CASE("grid counting") {
  const auto g = Grid::build(ConvexDomain::box({-1, -1}, {1, 1}), 1.0);
  REQUIRE(g.cell_count() == 4);
  std::set<std::pair<double, double>> centers;
  for (std::size_t c = 0; c < 4; ++c) centers.insert({g.center(c)[0], g.center(c)[1]});
  CHECK(centers == std::set<std::pair<double, double>>{{-0.5, -0.5}, {-0.5, 0.5}, {0.5, -0.5}, {0.5, 0.5}});

  const auto line = Grid::build(ConvexDomain::box({-2}, {2}), 1.0);
  CHECK(line.cell_count() == 4);
  CHECK(line.edges().size() == 3);
}

TEST_CASE("ball grid matches brute-force center enumeration") {
  const auto ball = ConvexDomain::ball({0, 0}, 1);
  for (auto alignment : {GridAlignment::CellCorner, GridAlignment::OriginCentered}) {
    for (double h : {0.5, 0.25, 0.1}) {
      const double shift = alignment == GridAlignment::CellCorner ? 0.5 : 0.0;
      std::size_t expected = 0;
      for (int i = -50; i <= 50; ++i) {
        for (int j = -50; j <= 50; ++j) {
          const double x = (i + shift) * h;
          const double y = (j + shift) * h;
          if (x * x + y * y < 1.0) ++expected;
        }
      }
      const auto g = Grid::build(ball, h, alignment);
      CHECK(g.cell_count() == expected);
    }
  }
  CHECK(Grid::build(ball, 0.5).cell_count() == 12);
}

TEST_CASE("grid invariants") {
  for (const auto& domain : sample_domains()) {
    for (auto alignment : {GridAlignment::CellCorner, GridAlignment::OriginCentered}) {
      const auto g = Grid::build(domain, 0.1, alignment);
      const Box& b = domain.bounding_box();
      CHECK(g.cell_count() * g.cell_volume() <= (b.hi[0] - b.lo[0]) * (b.hi[1] - b.lo[1]) + 1e-12);
      CHECK(g.cell_volume() == doctest::Approx(0.01));
      for (std::size_t c = 0; c < g.cell_count(); ++c) {
        CHECK(domain.contains(g.center(c)));
        CHECK(g.cell_of(g.center(c)) == c);
      }
      std::set<std::pair<std::size_t, std::size_t>> seen;
      for (const auto& e : g.edges()) {
        CHECK(e.from < e.to);
        CHECK(seen.insert({e.from, e.to}).second);
      }
      CHECK(g.cell_of(Vec{0, 0}).has_value());
    }
  }
}

TEST_CASE("cell_of placement of the base point") {
  const auto box = ConvexDomain::box({-1, -1}, {1, 1});
  const auto corner = Grid::build(box, 0.25);
  const auto c0 = *corner.cell_of(Vec{0, 0});
  CHECK(corner.center(c0)[0] == 0.125);
  CHECK(corner.center(c0)[1] == 0.125);
  const auto centered = Grid::build(box, 0.25, GridAlignment::OriginCentered);
  const auto o0 = *centered.cell_of(Vec{0, 0});
  CHECK(centered.center(o0)[0] == 0.0);
  CHECK(centered.center(o0)[1] == 0.0);
}

TEST_CASE("origin-centered refinement is nested on boxes") {
  const auto box = ConvexDomain::box({-1, -1.5}, {2, 1});
  auto coarse = Grid::build(box, 0.25, GridAlignment::OriginCentered);
  for (int level = 0; level < 3; ++level) {
    const double h = coarse.h() / 2;
    const auto fine = Grid::build(box, h, GridAlignment::OriginCentered);
    for (std::size_t c = 0; c < coarse.cell_count(); ++c) CHECK(fine.cell_of(coarse.center(c)).has_value());
    for (std::size_t c = 0; c < coarse.cell_count(); ++c) {
      const auto f = *fine.cell_of(coarse.center(c));
      CHECK(fine.center(f)[0] == coarse.center(c)[0]);
      CHECK(fine.center(f)[1] == coarse.center(c)[1]);
    }
    coarse = fine;
  }
}

TEST_CASE("grid errors") {
  const auto box = ConvexDomain::box({-1, -1}, {1, 1});
  CHECK_THROWS_AS(Grid::build(box, 3.0), InvalidInput);
  CHECK_THROWS_AS(Grid::build(box, 0.0), InvalidInput);
  CHECK_THROWS_AS(Grid::build(box, -1.0), InvalidInput);
}
