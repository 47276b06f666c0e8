#include "lipfree/grid.hpp"

#include <cmath>
#include <limits>

#include "lipfree/error.hpp"

namespace lipfree {

namespace {
constexpr std::size_t kMaxLatticeCells = std::size_t{1} << 28;
}

double Grid::lattice_coordinate(int k) const {
  return alignment_ == GridAlignment::CellCorner ? (k + 0.5) * h_ : k * h_;
}

Grid Grid::build(const ConvexDomain& domain, double h, GridAlignment alignment) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("grid spacing h must be positive and finite");
  if (!(h < domain.diameter())) throw InvalidInput("grid spacing h must be smaller than the domain diameter");
  Grid grid(domain, h, alignment);
  const std::size_t n = domain.dim();
  const Box& bbox = domain.bounding_box();
  const double shift = alignment == GridAlignment::CellCorner ? 0.5 : 0.0;

  grid.range_lo_.resize(n);
  grid.range_extent_.resize(n);
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const double jlo = std::floor(bbox.lo[k] / h - shift);
    const double jhi = std::ceil(bbox.hi[k] / h - shift);
    if (jhi - jlo + 1 > static_cast<double>(kMaxLatticeCells)) throw InvalidInput("grid spacing is too fine for the domain");
    grid.range_lo_[k] = static_cast<int>(jlo);
    grid.range_extent_[k] = static_cast<int>(jhi - jlo) + 1;
    total *= static_cast<std::size_t>(grid.range_extent_[k]);
    if (total > kMaxLatticeCells) throw InvalidInput("grid spacing is too fine for the domain");
  }

  grid.lookup_.assign(total, -1);
  std::vector<int> index(grid.range_lo_);
  Vec center(n);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t k = 0; k < n; ++k) center[k] = grid.lattice_coordinate(index[k]);
    if (domain.contains(center)) {
      if (grid.cell_count() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
        throw InvalidInput("grid has too many cells");
      }
      grid.lookup_[flat] = static_cast<std::int32_t>(grid.lattice_.size() / n);
      grid.lattice_.insert(grid.lattice_.end(), index.begin(), index.end());
      grid.centers_.insert(grid.centers_.end(), center.begin(), center.end());
    }
    for (std::size_t k = n; k-- > 0;) {
      if (++index[k] < grid.range_lo_[k] + grid.range_extent_[k]) break;
      index[k] = grid.range_lo_[k];
    }
  }
  if (grid.lattice_.empty()) throw InvalidInput("no grid cell center lies in the domain (h too large)");
  grid.cell_volume_ = std::pow(h, static_cast<double>(n));

  const std::vector<int> origin(n, 0);
  if (!grid.cell_at(origin)) throw InvalidInput("no grid cell contains the base point 0 (h too large)");

  const std::size_t cells = grid.cell_count();
  grid.outer_.assign(cells, 0);
  std::vector<int> step(n, 0);
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t k = 0; k < n; ++k) {
      step[k] = 1;
      const auto up = grid.neighbor(c, step);
      step[k] = -1;
      const auto down = grid.neighbor(c, step);
      step[k] = 0;
      if (up) grid.edges_.push_back({c, *up, k});
      if (!up || !down) grid.outer_[c] = 1;
    }
  }
  return grid;
}

std::optional<std::size_t> Grid::cell_at(std::span<const int> lattice_index) const {
  if (lattice_index.size() != dim()) throw InvalidInput("lattice index dimension mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dim(); ++k) {
    const int local = lattice_index[k] - range_lo_[k];
    if (local < 0 || local >= range_extent_[k]) return std::nullopt;
    flat = flat * static_cast<std::size_t>(range_extent_[k]) + static_cast<std::size_t>(local);
  }
  const std::int32_t cell = lookup_[flat];
  if (cell < 0) return std::nullopt;
  return static_cast<std::size_t>(cell);
}

std::optional<std::size_t> Grid::cell_of(std::span<const double> p) const {
  if (p.size() != dim()) throw InvalidInput("point dimension does not match the grid");
  const double shift = alignment_ == GridAlignment::CellCorner ? 0.0 : 0.5;
  std::vector<int> index(dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    const double j = std::floor(p[k] / h_ + shift);
    if (!std::isfinite(j) || std::abs(j) > 1e9) return std::nullopt;
    index[k] = static_cast<int>(j);
  }
  return cell_at(index);
}

std::optional<std::size_t> Grid::neighbor(std::size_t cell, std::span<const int> offset) const {
  const auto base = lattice(cell);
  std::vector<int> index(dim());
  for (std::size_t k = 0; k < dim(); ++k) index[k] = base[k] + offset[k];
  return cell_at(index);
}

}  // namespace lipfree
