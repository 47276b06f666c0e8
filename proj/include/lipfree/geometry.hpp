#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace lipfree {

// Points of R^n and covectors of (R^n)* share one representation; which is
// meant is fixed by context.
using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
Vec subtract(std::span<const double> a, std::span<const double> b);
double euclidean_norm(std::span<const double> v);

struct Box {
  Vec lo;
  Vec hi;

  friend bool operator==(const Box&, const Box&) = default;
};

struct Ball {
  Vec center;
  double radius = 0.0;

  friend bool operator==(const Ball&, const Ball&) = default;
};

// Open halfspace {x : <normal, x> < offset}.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

struct Polytope {
  std::vector<Halfspace> halfspaces;

  friend bool operator==(const Polytope&, const Polytope&) = default;
};

// Bounded open convex subset U of R^n with the base point 0 in its interior.
class ConvexDomain {
 public:
  using Shape = std::variant<Box, Ball, Polytope>;

  static ConvexDomain box(Vec lo, Vec hi);
  static ConvexDomain ball(Vec center, double radius);
  static ConvexDomain polytope(std::vector<Halfspace> halfspaces);

  std::size_t dim() const { return dim_; }
  const Shape& shape() const { return shape_; }
  const Box& bounding_box() const { return bbox_; }

  // Throws InvalidInput on dimension mismatch.
  bool contains(std::span<const double> p) const;

  // sup{t >= 0 : p + t*dir in U} for p in U.
  double exit_time(std::span<const double> p, std::span<const double> dir) const;

  // Euclidean diameter of the bounding box.
  double diameter() const;

  // Uniform sample by rejection from the bounding box.
  Vec sample(std::mt19937_64& rng) const;

 private:
  ConvexDomain(std::size_t dim, Shape shape, Box bbox)
      : dim_(dim), shape_(std::move(shape)), bbox_(std::move(bbox)) {}

  std::size_t dim_;
  Shape shape_;
  Box bbox_;
};

struct QuadratureNode {
  Vec point;
  double weight = 0.0;
};

// Composite midpoint nodes x + t_j (y - x), t_j = (j - 1/2)/m, weights 1/m.
std::vector<QuadratureNode> segment_nodes(const ConvexDomain& domain, std::span<const double> x,
                                          std::span<const double> y, int m);

enum class NormKind { L1, L2, Linf, Polyhedral };

// A norm on R^n together with its dual norm on (R^n)*. The polyhedral norm
// is the gauge of conv(D) for a symmetric direction set D; its dual norm is
// the support function u -> max_{d in D} <u, d>.
class NormSpec {
 public:
  static NormSpec l1() { return NormSpec(NormKind::L1); }
  static NormSpec l2() { return NormSpec(NormKind::L2); }
  static NormSpec linf() { return NormSpec(NormKind::Linf); }
  static NormSpec polyhedral(std::vector<Vec> directions);
  // k equally spaced unit vectors on the Euclidean circle (2D only).
  static NormSpec regular_polygon(int k);

  NormKind kind() const { return kind_; }
  const std::vector<Vec>& directions() const { return directions_; }

  double norm(std::span<const double> v) const;
  double dual_norm(std::span<const double> u) const;

  // A vector v with norm(v) = 1 and <u, v> = dual_norm(u) (u != 0).
  Vec extremal(std::span<const double> u) const;

 private:
  explicit NormSpec(NormKind kind) : kind_(kind) {}

  NormKind kind_;
  std::vector<Vec> directions_;
  // Facet covectors of conv(D) scaled so that <facet, x> = 1 on the facet;
  // populated for 2D polyhedral norms, where norm(v) = max over facets.
  std::vector<Vec> facets_;
};

const char* to_string(NormKind kind);

}  // namespace lipfree
