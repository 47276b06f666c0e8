#include <doctest.h>

#include <cmath>
#include <random>

#include "lipfree/error.hpp"
#include "lipfree/lipcalc.hpp"
#include "lipfree/operator_t.hpp"

using namespace lipfree;

namespace {

const ConvexDomain kBox = ConvexDomain::box({-1, -1}, {1, 1});

VectorField constant_field(Vec c) {
  const std::size_t n = c.size();
  return VectorField(n, [c](std::span<const double>) { return c; });
}

VectorField rotation() {
  return VectorField(2, [](std::span<const double> p) { return Vec{-p[1], p[0]}; });
}

SampledFunction quadratic() {
  return SampledFunction(2, [](std::span<const double> y) { return 0.5 * dot(y, y); });
}

SampledFunction wave() {
  return SampledFunction(2, [](std::span<const double> y) { return std::sin(y[0] + 0.5 * y[1]); });
}

SampledFunction radial() {
  return SampledFunction(2, [](std::span<const double> y) { return euclidean_norm(y); });
}

// Kernel weights of the 1D mollifier, written out from the bump formula.
double abs_pairing_oracle(double eps, double h) {
  double mass = 0.0;
  double moment = 0.0;
  for (int j = -1000; j <= 1000; ++j) {
    const double t = j * h / eps;
    if (std::abs(t) >= 1.0) continue;
    const double w = (1 - t * t) * (1 - t * t);
    mass += w;
    moment += w * std::abs(j * h);
  }
  return 1.0 - moment / mass;
}

}  // namespace

TEST_CASE("t_apply examples") {
  const Vec x = {0.2, -0.4};
  const Vec y = {-0.7, 0.9};
  CHECK(t_apply(constant_field({1.5, -2.0}), x, y, 7) == doctest::Approx(1.5 * -0.9 + -2.0 * 1.3).epsilon(1e-14));
  const VectorField identity(2, [](std::span<const double> p) { return Vec(p.begin(), p.end()); });
  CHECK(t0_apply(identity, Vec{1, 1}, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(t_apply(rotation(), Vec{1, 0}, Vec{0, 1}, 3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(t_apply(rotation(), Vec{1, 0}, Vec{0, 1}, 0), InvalidInput);
}

TEST_CASE("t0_apply examples") {
  std::mt19937_64 rng(2);
  for (int s = 0; s < 100; ++s) {
    const Vec y = kBox.sample(rng);
    CHECK(std::abs(t0_apply(rotation(), y)) <= 1e-15);
    CHECK(t0_apply(constant_field({0.3, 0.6}), y) == doctest::Approx(0.3 * y[0] + 0.6 * y[1]).epsilon(1e-13));
    CHECK(t0_apply(constant_field({0.0, 0.0}), y) == 0.0);
  }
}

TEST_CASE("vector field validation") {
  const VectorField wrong(2, [](std::span<const double>) { return Vec{1.0}; });
  CHECK_THROWS_AS(wrong(Vec{0, 0}), InvalidInput);
  const VectorField bad(1, [](std::span<const double>) { return Vec{NAN}; });
  CHECK_THROWS_AS(bad(Vec{0}), InvalidInput);
}

TEST_CASE("gradient examples") {
  std::mt19937_64 rng(4);
  const SampledFunction linear(2, [](std::span<const double> y) { return 0.5 * y[0] - 3.0 * y[1]; });
  const auto gl = gradient(linear, kBox);
  const auto gq = gradient(quadratic(), kBox);
  for (int s = 0; s < 200; ++s) {
    const Vec p = kBox.sample(rng);
    const Vec a = gl(p);
    CHECK(a[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(a[1] == doctest::Approx(-3.0).epsilon(1e-10));
    const Vec b = gq(p);
    CHECK(std::abs(b[0] - p[0]) <= 1e-10);
    CHECK(std::abs(b[1] - p[1]) <= 1e-10);
  }
  const auto big = ConvexDomain::box({-5, -5}, {5, 5});
  const Vec g34 = gradient(radial(), big, 1e-4)(Vec{3, 4});
  CHECK(std::abs(g34[0] - 0.6) <= 1e-7);
  CHECK(std::abs(g34[1] - 0.8) <= 1e-7);
}

TEST_CASE("gradient near the boundary goes one-sided") {
  const SampledFunction linear(2, [](std::span<const double> y) { return 2.0 * y[0] + y[1]; });
  const auto g = gradient(linear, kBox, 1e-2);
  const Vec edge = g(Vec{1.0 - 1e-6, -1.0 + 1e-7});
  CHECK(edge[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(edge[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(g(Vec{1.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(gradient(linear, kBox, 0.0), InvalidInput);
}

TEST_CASE("gradient with a surrogate bound") {
  const auto g = gradient(wave(), kBox, NormSpec::l2(), 1e-4, 20000, 9);
  REQUIRE(g.bound().has_value());
  CHECK(*g.bound() <= std::sqrt(1.25) + 1e-12);
  CHECK(*g.bound() >= std::sqrt(1.25) - 0.05);
}

TEST_CASE("compatibility residual") {
  for (auto f : {quadratic(), wave()}) {
    const auto g = gradient(f, kBox);
    const auto report = compat_residual(g, kBox, 2000, 13, 256);
    CHECK(report.pairs_tested == 2000);
    CHECK(report.max_residual <= 1e-4);
    CHECK(kBox.contains(report.worst_pair.first));
    CHECK(kBox.contains(report.worst_pair.second));
  }
  // Zero up to rounding on random pairs, and exactly zero on dyadic data.
  CHECK(compat_residual(constant_field({0.4, -1.1}), kBox, 500, 1).max_residual <= 1e-12);
  const std::vector<PointPair> dyadic = {{{0.5, -0.25}, {-0.75, 0.125}}, {{0.0625, 0.5}, {0.25, -0.5}}};
  CHECK(compat_residual(constant_field({0.5, -1.25}), kBox, dyadic).max_residual == 0.0);
  const std::vector<PointPair> canonical = {{{1, 0}, {0, 1}}};
  const auto box2 = ConvexDomain::box({-2, -2}, {2, 2});
  const auto rot = compat_residual(rotation(), box2, canonical);
  CHECK(rot.max_residual == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rot.max_residual >= 0.5);
  const std::vector<PointPair> outside = {{{0, 0}, {3, 0}}};
  CHECK_THROWS_AS(compat_residual(rotation(), kBox, outside), InvalidInput);
}

TEST_CASE("round trip") {
  const SampledFunction linear(2, [](std::span<const double> y) { return y[0] - 0.25 * y[1]; });
  CHECK(roundtrip_error(linear, kBox, 1e-4, 256, 1000, 3) <= 1e-12);
  CHECK(roundtrip_error(quadratic(), kBox, 1e-4, 256, 1000, 3) <= 1e-6);
  CHECK(roundtrip_error(radial(), kBox, 1e-4, 256, 1000, 3) <= 1e-3);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  PointData data{{{0, 0}}, {0}};
  for (int i = 0; i < 4; ++i) {
    data.points.push_back({u(rng), u(rng)});
    data.values.push_back(u(rng));
  }
  const auto l2 = NormSpec::l2();
  const auto h = mcshane_extend(data, lip_constant_finite(data, l2), l2);
  CHECK(roundtrip_error(h, kBox, 1e-4, 256, 1000, 3) <= 1e-2);
}

TEST_CASE("round trip converges under refinement") {
  // The quadratic is reproduced exactly by both central differences and the
  // midpoint rule, so its error sits at rounding level at every setting.
  CHECK(roundtrip_error(quadratic(), kBox, 1e-2, 16, 500, 21) <= 1e-12);
  CHECK(roundtrip_error(quadratic(), kBox, 5e-3, 32, 500, 21) <= 1e-12);
  double previous = roundtrip_error(wave(), kBox, 1e-2, 16, 500, 21);
  for (int level = 1; level <= 3; ++level) {
    const double step = 1e-2 / (1 << level);
    const int m = 16 << level;
    const double err = roundtrip_error(wave(), kBox, step, m, 500, 21);
    CHECK(previous >= 1.5 * err);
    previous = err;
  }
}

TEST_CASE("norm inequalities") {
  std::mt19937_64 rng(8);
  const auto l2 = NormSpec::l2();
  const VectorField bounded(2, [](std::span<const double> p) { return Vec{std::cos(3 * p[1]), std::sin(2 * p[0])}; },
                            std::sqrt(2.0));
  for (int s = 0; s < 2000; ++s) {
    const Vec x = kBox.sample(rng);
    const Vec y = kBox.sample(rng);
    CHECK(std::abs(t_apply(bounded, x, y)) <= *bounded.bound() * l2.norm(subtract(y, x)) + 1e-6);
  }
  const auto g = gradient(wave(), kBox);
  for (int s = 0; s < 2000; ++s) {
    CHECK(l2.dual_norm(g(kBox.sample(rng))) <= std::sqrt(1.25) + 1e-6);
  }
  const auto points = sample_points(kBox, 500, 5);
  CHECK(sampled_sup_norm(g, l2, points) <= std::sqrt(1.25) + 1e-6);
}

TEST_CASE("additivity along a line") {
  std::mt19937_64 rng(12);
  const auto g = gradient(wave(), kBox);
  for (int s = 0; s < 200; ++s) {
    const Vec x = kBox.sample(rng);
    const Vec z = kBox.sample(rng);
    const Vec mid = {x[0] + 0.3 * (z[0] - x[0]), x[1] + 0.3 * (z[1] - x[1])};
    CHECK(std::abs(t_apply(g, x, z) - t_apply(g, x, mid) - t_apply(g, mid, z)) <= 1e-5);
    CHECK(std::abs(t_apply(rotation(), x, z) - t_apply(rotation(), x, mid) - t_apply(rotation(), mid, z)) <= 1e-13);
  }
}

TEST_CASE("sampled pairs are distinct and reproducible") {
  const auto a = sample_pairs(kBox, 100, 6);
  const auto b = sample_pairs(kBox, 100, 6);
  CHECK(a == b);
  for (const auto& [x, y] : a) CHECK(x != y);
}

TEST_CASE("mollifier preserves affine functions") {
  const auto box = ConvexDomain::box({-2, -2}, {2, 2});
  const auto grid = Grid::build(box, 1.0 / 16);
  const SampledFunction affine(2, [](std::span<const double> y) { return 0.7 * y[0] - 1.3 * y[1]; });
  const auto m = mollify(affine, 0.25, grid);
  std::mt19937_64 rng(3);
  const auto inner = ConvexDomain::box({-1, -1}, {1, 1});
  for (int s = 0; s < 100; ++s) {
    const Vec p = inner.sample(rng);
    CHECK(std::abs(m(p) - affine(p)) <= 1e-12);
  }
}

TEST_CASE("mollifier pairing in 1D") {
  const auto line = ConvexDomain::box({-2}, {2});
  const double h = 1.0 / 64;
  const auto grid = std::make_shared<const Grid>(Grid::build(line, h));
  CellField indicator{grid, Vec(grid->cell_count(), 0.0)};
  for (std::size_t c = 0; c < grid->cell_count(); ++c) {
    const double x = grid->center(c)[0];
    if (x > 0 && x < 1) indicator.values[c] = 1.0;
  }
  const SampledFunction abs1(1, [](std::span<const double> y) { return std::abs(y[0]); });
  const Vec eps = {16 * h, 8 * h, 4 * h, 2 * h, h};
  const Vec pairing = mollify_pairing_test(abs1, indicator, eps);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    CHECK(pairing[i] == doctest::Approx(abs_pairing_oracle(eps[i], h)).epsilon(1e-12));
    if (i > 0) CHECK(std::abs(pairing[i] - 1) <= std::abs(pairing[i - 1] - 1));
  }
  CHECK(std::abs(pairing.back() - 1.0) <= 1e-3);
  CHECK(std::abs(pairing.front() - (1 - 5.0 / 16 * eps.front())) <= 3 * h);

  const SampledFunction affine(1, [](std::span<const double> y) { return 2.5 * y[0]; });
  for (double p : mollify_pairing_test(affine, indicator, eps)) CHECK(p == doctest::Approx(2.5).epsilon(1e-12));
  const SampledFunction zero(1, [](std::span<const double>) { return 0.0; });
  for (double p : mollify_pairing_test(zero, indicator, eps)) CHECK(p == 0.0);
  CHECK(grid_pairing(abs1, indicator, Exec::Serial) == grid_pairing(abs1, indicator, Exec::Parallel));

  CHECK_THROWS_AS(mollify(abs1, 2.5, *grid), InvalidInput);
  CHECK_THROWS_AS(mollify(abs1, 0.0, *grid), InvalidInput);
}
