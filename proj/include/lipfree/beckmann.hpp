#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lipfree/freenorm.hpp"
#include "lipfree/grid.hpp"
#include "lipfree/kernels.hpp"
#include "lipfree/lp_core.hpp"
#include "lipfree/operator_t.hpp"

namespace lipfree {

// Lattice offsets along which flow may move between cell centers, one per
// unordered direction pair (each offset is lexicographically positive).
struct Stencil {
  std::vector<std::vector<int>> offsets;
};

inline constexpr int kDefaultFacets = 32;

// l1: axis offsets. linf: {-1,0,1}^n. l2 in 2D: the first `facets` primitive
// directions of the Stern-Brocot refinement (facets = 4 * 2^L); in 3D the
// 26-neighborhood, widened to radius 2 for facets > 26. Polyhedral norms use
// the same direction sets as l2. In 1D the stencil is always {1}.
Stencil make_stencil(const NormSpec& norm, std::size_t dim, int facets = kDefaultFacets);

// Flow field on a grid: signed mass flow along links between cell centers,
// positive from the lower to the higher cell index. The L1 mass of the field
// is sum |flux| * ||center_to - center_from||.
struct GridField {
  struct Link {
    std::size_t from;
    std::size_t to;
  };

  std::shared_ptr<const Grid> grid;
  std::vector<Link> links;
  Vec flux;

  static GridField zero(std::shared_ptr<const Grid> grid);
  std::size_t size() const { return links.size(); }
};

// Sum of two fields on the same grid; coinciding links are merged.
GridField operator+(const GridField& a, const GridField& b);
GridField operator*(double factor, const GridField& field);

// Flux phi circulating around the unit square spanned by axes a < b at the
// given cell (counterclockwise in the (a, b) plane). Throws InvalidInput
// when a corner cell is missing.
GridField plaquette_curl(std::shared_ptr<const Grid> grid, std::size_t cell, std::size_t axis_a,
                         std::size_t axis_b, double phi);

// Per-cell densities; masses are value * h^n and sum to zero.
struct SourceVector {
  std::shared_ptr<const Grid> grid;
  Vec values;
  std::vector<std::string> warnings;

  double total_mass() const;
};

// (div F)_c = (outflow_c - inflow_c) / h^n.
SourceVector discrete_divergence(const GridField& field, Exec exec = Exec::Parallel);

// s[cell_of(0)] += sum a_i / h^n, s[cell_of(x_i)] -= a_i / h^n.
SourceVector assemble_source(const Molecule& mu, std::shared_ptr<const Grid> grid);

// sum |flux| * norm(displacement).
double field_mass(const GridField& field, const NormSpec& norm);

struct DivergenceCheck {
  bool divergence_free = false;
  double max_residual = 0.0;
};

DivergenceCheck div_free_check(const GridField& field, double tol);

enum class BeckmannMethod { NetworkSimplex, ShortestPaths, DenseLP };

struct BeckmannOptions {
  int facets = kDefaultFacets;
  BeckmannMethod method = BeckmannMethod::NetworkSimplex;
};

struct BeckmannResult {
  double value = 0.0;
  GridField field;
  // Mass carried by links touching the outermost cell layer.
  double boundary_mass = 0.0;
  std::vector<std::string> warnings;
};

// Minimal-mass flow with divergence s on the stencil graph of the norm.
// Throws InvalidInput for unbalanced sources and InfeasibleProblem when the
// support of s is disconnected.
BeckmannResult solve_beckmann(const SourceVector& source, const NormSpec& norm,
                              const BeckmannOptions& options = {});

// Quotient distance of F to the divergence-free fields.
double coset_distance(const GridField& field, const NormSpec& norm,
                      const BeckmannOptions& options = {});

// Per-cell vector representation: each link's mass flow vector is split
// evenly between its two end cells and divided by the cell volume.
CellField cell_vectors(const GridField& field);

void write_edge_csv(std::ostream& out, const GridField& field);
void write_cell_csv(std::ostream& out, const CellField& field);

struct StudyProblem {
  ConvexDomain domain;
  NormSpec norm;
  Molecule molecule;
  GridAlignment alignment = GridAlignment::CellCorner;
};

struct StudyRow {
  double h = 0.0;
  int k = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double seconds = 0.0;
  bool failed = false;
  std::string error;
};

// One row per (h, k) in h_list x k_list, sorted by h descending then k
// ascending; dual = kr_dual_norm computed once.
std::vector<StudyRow> refine_study(const StudyProblem& problem, std::span<const double> h_list,
                                   std::span<const int> k_list, Exec exec = Exec::Parallel);

// Header h,k,primal,dual,gap,seconds with %.9f values.
void write_study_csv(std::ostream& out, std::span<const StudyRow> rows);

}  // namespace lipfree
