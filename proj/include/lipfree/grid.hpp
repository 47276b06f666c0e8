#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lipfree/geometry.hpp"

namespace lipfree {

// Placement of the cell-center lattice relative to the origin.
//  CellCorner:     centers at (k + 1/2) h; cell k covers [k h, (k + 1) h),
//                  so the base point sits at a cell corner and belongs to
//                  the cell with lattice index 0.
//  OriginCentered: centers at k h; cell k covers [(k - 1/2) h, (k + 1/2) h),
//                  so the base point is the center of cell 0.
enum class GridAlignment { CellCorner, OriginCentered };

struct GridEdge {
  std::size_t from;  // lower cell index
  std::size_t to;
  std::size_t axis;
};

// Uniform cubical discretization of a ConvexDomain. Cells are those lattice
// cells whose centers lie in U, indexed in lexicographic order of their
// lattice coordinates (first axis slowest), so a lexicographically positive
// lattice offset always leads to a higher cell index.
class Grid {
 public:
  static Grid build(const ConvexDomain& domain, double h,
                    GridAlignment alignment = GridAlignment::CellCorner);

  const ConvexDomain& domain() const { return domain_; }
  double h() const { return h_; }
  std::size_t dim() const { return domain_.dim(); }
  GridAlignment alignment() const { return alignment_; }
  std::size_t cell_count() const { return lattice_.size() / dim(); }
  double cell_volume() const { return cell_volume_; }

  std::span<const int> lattice(std::size_t cell) const {
    return {lattice_.data() + cell * dim(), dim()};
  }
  std::span<const double> center(std::size_t cell) const {
    return {centers_.data() + cell * dim(), dim()};
  }

  std::optional<std::size_t> cell_at(std::span<const int> lattice_index) const;
  std::optional<std::size_t> cell_of(std::span<const double> p) const;
  std::optional<std::size_t> neighbor(std::size_t cell, std::span<const int> offset) const;

  // Axis-adjacent pairs, each unordered pair listed once.
  const std::vector<GridEdge>& edges() const { return edges_; }

  // True when some axis neighbor of the cell is missing.
  bool is_outer(std::size_t cell) const { return outer_[cell] != 0; }

  double lattice_coordinate(int k) const;

 private:
  Grid(ConvexDomain domain, double h, GridAlignment alignment)
      : domain_(std::move(domain)), h_(h), alignment_(alignment) {}

  ConvexDomain domain_;
  double h_;
  GridAlignment alignment_;
  double cell_volume_ = 0.0;
  std::vector<int> lattice_;
  Vec centers_;
  std::vector<int> range_lo_;
  std::vector<int> range_extent_;
  std::vector<std::int32_t> lookup_;
  std::vector<GridEdge> edges_;
  std::vector<std::uint8_t> outer_;
};

}  // namespace lipfree
