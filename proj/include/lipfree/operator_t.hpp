#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lipfree/geometry.hpp"
#include "lipfree/grid.hpp"
#include "lipfree/kernels.hpp"
#include "lipfree/lipcalc.hpp"

namespace lipfree {

inline constexpr int kDefaultQuadratureNodes = 256;
inline constexpr double kDefaultStencilStep = 1e-4;

// Covector field on U, standing for an element of L^inf(U; (R^n)*).
class VectorField {
 public:
  using Evaluator = std::function<Vec(std::span<const double>)>;

  VectorField(std::size_t dim, Evaluator evaluator, std::optional<double> bound = std::nullopt);

  // Throws InvalidInput when the evaluator returns a wrong-sized or
  // non-finite covector.
  Vec operator()(std::span<const double> p) const;
  std::size_t dim() const { return dim_; }
  std::optional<double> bound() const { return bound_; }

 private:
  std::size_t dim_;
  Evaluator evaluator_;
  std::optional<double> bound_;
};

// Largest dual norm of the field over the given points.
double sampled_sup_norm(const VectorField& g, const NormSpec& norm, std::span<const Vec> points,
                        Exec exec = Exec::Parallel);

// Midpoint rule for int_0^1 <g(x + t (y - x)), y - x> dt with m nodes.
double t_apply(const VectorField& g, std::span<const double> x, std::span<const double> y,
               int m = kDefaultQuadratureNodes);
double t0_apply(const VectorField& g, std::span<const double> y, int m = kDefaultQuadratureNodes);

// Central differences with spacing `step`; one-sided (and shrunk) where the
// central stencil leaves U.
VectorField gradient(const SampledFunction& f, const ConvexDomain& domain,
                     double step = kDefaultStencilStep,
                     std::optional<double> declared_bound = std::nullopt);

// Same, declaring essential_lip_estimate(f, ...) as the field's bound.
VectorField gradient(const SampledFunction& f, const ConvexDomain& domain, const NormSpec& norm,
                     double step, std::size_t surrogate_samples, std::uint64_t seed);

using PointPair = std::pair<Vec, Vec>;

std::vector<PointPair> sample_pairs(const ConvexDomain& domain, std::size_t count,
                                    std::uint64_t seed);
std::vector<Vec> sample_points(const ConvexDomain& domain, std::size_t count, std::uint64_t seed);

struct CompatReport {
  double max_residual = 0.0;
  PointPair worst_pair;
  std::size_t pairs_tested = 0;
};

// max over pairs of |T0 g(y) - T0 g(x) - Tx g(y)| / ||y - x||.
CompatReport compat_residual(const VectorField& g, const ConvexDomain& domain,
                             std::span<const PointPair> pairs, int m = kDefaultQuadratureNodes,
                             const NormSpec& norm = NormSpec::l2(), Exec exec = Exec::Parallel);
CompatReport compat_residual(const VectorField& g, const ConvexDomain& domain, std::size_t samples,
                             std::uint64_t seed, int m = kDefaultQuadratureNodes,
                             const NormSpec& norm = NormSpec::l2(), Exec exec = Exec::Parallel);

// max over uniform probes y of |T0(gradient f)(y) - f(y)|.
double roundtrip_error(const SampledFunction& f, const ConvexDomain& domain, double step, int m,
                       std::size_t probes, std::uint64_t seed, Exec exec = Exec::Parallel);

// Discrete convolution with the tensor-product bump (1 - t^2)^2 of half-width
// eps, sampled at the grid spacing and normalized to unit mass, then
// re-based so that the result vanishes at 0. Throws InvalidInput when the
// kernel around 0 leaves U; evaluation at points whose kernel support leaves
// U throws as well.
SampledFunction mollify(const SampledFunction& f, double eps, const Grid& grid);

// Per-cell covector field on a grid, standing for an element of L^1(U; R^n).
struct CellField {
  std::shared_ptr<const Grid> grid;
  Vec values;  // cell_count * dim, row-major by cell

  std::span<const double> at(std::size_t cell) const {
    return {values.data() + cell * grid->dim(), grid->dim()};
  }
};

// Sum over cells of <grad f(c), field(c)> h^n, the gradient taken by
// differences across the faces of each cell.
double grid_pairing(const SampledFunction& f, const CellField& field, Exec exec = Exec::Parallel);

// grid_pairing(mollify(f, eps), field) for each eps.
Vec mollify_pairing_test(const SampledFunction& f, const CellField& field, std::span<const double> eps_sequence,
                         Exec exec = Exec::Parallel);

}  // namespace lipfree
