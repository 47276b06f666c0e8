#include "lipfree/beckmann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "lipfree/error.hpp"

namespace lipfree {
namespace {

void check_field(const GridField& field) {
  if (!field.grid) throw InvalidInput("grid field has no grid");
  if (field.flux.size() != field.links.size()) throw InvalidInput("grid field needs one flux per link");
  const std::size_t cells = field.grid->cell_count();
  for (std::size_t l = 0; l < field.links.size(); ++l) {
    const auto& link = field.links[l];
    if (link.from >= cells || link.to >= cells || link.from == link.to) throw InvalidInput("grid field link out of range");
    if (!std::isfinite(field.flux[l])) throw InvalidInput("grid field has a non-finite flux");
  }
}

Vec displacement(const Grid& grid, std::size_t from, std::size_t to) {
  return subtract(grid.center(to), grid.center(from));
}

std::string format_value(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.9f", v);
  return buffer;
}

}  // namespace

GridField GridField::zero(std::shared_ptr<const Grid> grid) {
  if (!grid) throw InvalidInput("grid field needs a grid");
  GridField field;
  field.grid = std::move(grid);
  return field;
}

GridField operator+(const GridField& a, const GridField& b) {
  check_field(a);
  check_field(b);
  if (a.grid != b.grid) throw InvalidInput("cannot add fields on different grids");
  GridField sum = GridField::zero(a.grid);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
  auto absorb = [&](const GridField& f) {
    for (std::size_t l = 0; l < f.links.size(); ++l) {
      auto link = f.links[l];
      double flux = f.flux[l];
      if (link.from > link.to) {
        std::swap(link.from, link.to);
        flux = -flux;
      }
      auto [it, inserted] = slot.try_emplace({link.from, link.to}, sum.links.size());
      if (inserted) {
        sum.links.push_back(link);
        sum.flux.push_back(flux);
      } else {
        sum.flux[it->second] += flux;
      }
    }
  };
  absorb(a);
  absorb(b);
  return sum;
}

GridField operator*(double factor, const GridField& field) {
  GridField out = field;
  for (double& f : out.flux) f *= factor;
  return out;
}

GridField plaquette_curl(std::shared_ptr<const Grid> grid, std::size_t cell, std::size_t axis_a, std::size_t axis_b,
                         double phi) {
  if (!grid) throw InvalidInput("plaquette needs a grid");
  const std::size_t n = grid->dim();
  if (!(axis_a < axis_b && axis_b < n)) throw InvalidInput("plaquette needs two distinct axes a < b");
  if (cell >= grid->cell_count()) throw InvalidInput("plaquette cell out of range");
  std::vector<int> ea(n, 0), eb(n, 0), eab(n, 0);
  ea[axis_a] = 1;
  eb[axis_b] = 1;
  eab[axis_a] = 1;
  eab[axis_b] = 1;
  const auto c10 = grid->neighbor(cell, ea);
  const auto c01 = grid->neighbor(cell, eb);
  const auto c11 = grid->neighbor(cell, eab);
  if (!c10 || !c01 || !c11) throw InvalidInput("plaquette corner cell missing");
  GridField field = GridField::zero(grid);
  // cell -> c10 -> c11 -> c01 -> cell, stored in low-to-high orientation.
  field.links = {{cell, *c10}, {*c10, *c11}, {*c01, *c11}, {cell, *c01}};
  field.flux = {phi, phi, -phi, -phi};
  return field;
}

double SourceVector::total_mass() const {
  double total = 0.0;
  for (double v : values) total += v;
  return total * grid->cell_volume();
}

SourceVector discrete_divergence(const GridField& field, Exec exec) {
  check_field(field);
  const Grid& grid = *field.grid;
  const std::size_t cells = grid.cell_count();
  // Link incidence per cell, in link order, so each cell sums in a fixed order.
  std::vector<std::size_t> start(cells + 1, 0);
  for (const auto& link : field.links) {
    ++start[link.from + 1];
    ++start[link.to + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) start[c + 1] += start[c];
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  std::vector<std::pair<std::size_t, double>> incident(start.back());
  for (std::size_t l = 0; l < field.links.size(); ++l) {
    incident[fill[field.links[l].from]++] = {l, 1.0};
    incident[fill[field.links[l].to]++] = {l, -1.0};
  }
  SourceVector div;
  div.grid = field.grid;
  div.values.assign(cells, 0.0);
  const double volume = grid.cell_volume();
  kernels::for_each_index(
      cells,
      [&](std::size_t c) {
        double net = 0.0;
        for (std::size_t i = start[c]; i < start[c + 1]; ++i) net += incident[i].second * field.flux[incident[i].first];
        div.values[c] = net / volume;
      },
      exec);
  return div;
}

SourceVector assemble_source(const Molecule& mu, std::shared_ptr<const Grid> grid) {
  if (!grid) throw InvalidInput("source needs a grid");
  if (mu.dim() != grid->dim()) throw InvalidInput("molecule and grid dimensions differ");
  const auto base = grid->cell_of(Vec(grid->dim(), 0.0));
  if (!base) throw InvalidInput("base point maps to no cell");
  std::map<std::size_t, double> mass;
  double total = 0.0;
  for (const auto& atom : mu.atoms()) {
    const auto cell = grid->cell_of(atom.point);
    if (!cell) throw InvalidInput("atom maps to no grid cell");
    mass[*cell] -= atom.weight;
    total += atom.weight;
  }
  mass[*base] += total;

  SourceVector s;
  s.grid = grid;
  s.values.assign(grid->cell_count(), 0.0);
  const double volume = grid->cell_volume();
  bool any = false;
  for (const auto& [cell, m] : mass) {
    s.values[cell] = m / volume;
    any = any || m != 0.0;
  }
  std::size_t distinct = mass.size();
  if (!any) {
    s.warnings.push_back("resolution: every atom shares the base cell; the grid sees the zero element");
  } else if (distinct < mu.size() + 1) {
    s.warnings.push_back("resolution: several atoms share a cell and were merged");
  }
  return s;
}

double field_mass(const GridField& field, const NormSpec& norm) {
  check_field(field);
  double total = 0.0;
  for (std::size_t l = 0; l < field.links.size(); ++l) {
    total += std::abs(field.flux[l]) * norm.norm(displacement(*field.grid, field.links[l].from, field.links[l].to));
  }
  return total;
}

DivergenceCheck div_free_check(const GridField& field, double tol) {
  if (!(tol >= 0.0)) throw InvalidInput("divergence tolerance must be nonnegative");
  const SourceVector div = discrete_divergence(field);
  DivergenceCheck check;
  for (double v : div.values) check.max_residual = std::max(check.max_residual, std::abs(v));
  check.divergence_free = check.max_residual <= tol;
  return check;
}

BeckmannResult solve_beckmann(const SourceVector& source, const NormSpec& norm, const BeckmannOptions& options) {
  if (!source.grid) throw InvalidInput("source has no grid");
  const Grid& grid = *source.grid;
  const std::size_t cells = grid.cell_count();
  if (source.values.size() != cells) throw InvalidInput("source needs one value per cell");
  const double volume = grid.cell_volume();
  double net = 0.0;
  double scale = 0.0;
  for (double v : source.values) {
    if (!std::isfinite(v)) throw InvalidInput("source has a non-finite value");
    net += v * volume;
    scale += std::abs(v) * volume;
  }
  if (std::abs(net) > 1e-12 * std::max(1.0, scale)) throw InvalidInput("unbalanced source: masses do not sum to zero");

  BeckmannResult result;
  result.field = GridField::zero(source.grid);
  result.warnings = source.warnings;
  if (scale == 0.0) return result;

  const Stencil stencil = make_stencil(norm, grid.dim(), options.facets);
  std::vector<double> offset_cost;
  for (const auto& o : stencil.offsets) {
    Vec v(o.size());
    for (std::size_t k = 0; k < o.size(); ++k) v[k] = o[k] * grid.h();
    offset_cost.push_back(norm.norm(v));
  }

  std::vector<GridField::Link> links;
  Vec link_cost;
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t o = 0; o < stencil.offsets.size(); ++o) {
      if (const auto nb = grid.neighbor(c, stencil.offsets[o])) {
        links.push_back({c, *nb});
        link_cost.push_back(offset_cost[o]);
      }
    }
  }

  Vec flow(2 * links.size(), 0.0);
  double value = 0.0;
  if (options.method == BeckmannMethod::DenseLP) {
    // Same flow problem as an explicit LP: maximize -cost . flow.
    LPProblem lp(2 * links.size());
    for (std::size_t l = 0; l < links.size(); ++l) {
      lp.objective[2 * l] = -link_cost[l];
      lp.objective[2 * l + 1] = -link_cost[l];
    }
    std::vector<Vec> rows(cells, Vec(2 * links.size(), 0.0));
    for (std::size_t l = 0; l < links.size(); ++l) {
      rows[links[l].from][2 * l] += 1.0;
      rows[links[l].to][2 * l] -= 1.0;
      rows[links[l].to][2 * l + 1] += 1.0;
      rows[links[l].from][2 * l + 1] -= 1.0;
    }
    for (std::size_t c = 0; c < cells; ++c) lp.add(std::move(rows[c]), Relation::Equal, source.values[c] * volume);
    const LPSolution sol = lp_solve(lp);
    if (sol.status != LPStatus::Optimal) throw InfeasibleProblem("source support is disconnected on this grid");
    flow = sol.primal;
    value = -sol.value;
  } else {
    FlowNetwork network;
    network.supply.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) network.supply[c] = source.values[c] * volume;
    network.arcs.reserve(2 * links.size());
    for (std::size_t l = 0; l < links.size(); ++l) {
      network.arcs.push_back({links[l].from, links[l].to, link_cost[l]});
      network.arcs.push_back({links[l].to, links[l].from, link_cost[l]});
    }
    const McfMethod method = options.method == BeckmannMethod::ShortestPaths ? McfMethod::SuccessiveShortestPaths
                                                                             : McfMethod::NetworkSimplex;
    const McfSolution sol = mcf_solve(network, method);
    if (sol.status != McfStatus::Optimal) throw InfeasibleProblem("source support is disconnected on this grid");
    flow = sol.flow;
    value = sol.value;
  }

  for (std::size_t l = 0; l < links.size(); ++l) {
    const double f = flow[2 * l] - flow[2 * l + 1];
    if (f == 0.0) continue;
    result.field.links.push_back(links[l]);
    result.field.flux.push_back(f);
    if (grid.is_outer(links[l].from) || grid.is_outer(links[l].to)) result.boundary_mass += std::abs(f) * link_cost[l];
  }
  result.value = value;
  if (result.boundary_mass > 1e-9 * std::max(1.0, value)) {
    result.warnings.push_back("boundary: optimal flow touches the outermost cell layer (mass " +
                              format_value(result.boundary_mass) + ")");
  }
  return result;
}

double coset_distance(const GridField& field, const NormSpec& norm, const BeckmannOptions& options) {
  return solve_beckmann(discrete_divergence(field), norm, options).value;
}

CellField cell_vectors(const GridField& field) {
  check_field(field);
  const Grid& grid = *field.grid;
  const std::size_t n = grid.dim();
  CellField out{field.grid, Vec(grid.cell_count() * n, 0.0)};
  const double share = 0.5 / grid.cell_volume();
  for (std::size_t l = 0; l < field.links.size(); ++l) {
    const auto [from, to] = field.links[l];
    const Vec d = displacement(grid, from, to);
    for (std::size_t k = 0; k < n; ++k) {
      out.values[from * n + k] += share * field.flux[l] * d[k];
      out.values[to * n + k] += share * field.flux[l] * d[k];
    }
  }
  return out;
}

void write_edge_csv(std::ostream& out, const GridField& field) {
  check_field(field);
  out << "edge_from,edge_to,flux\n";
  for (std::size_t l = 0; l < field.links.size(); ++l) {
    out << field.links[l].from << ',' << field.links[l].to << ',' << format_value(field.flux[l]) << '\n';
  }
}

void write_cell_csv(std::ostream& out, const CellField& field) {
  const std::size_t n = field.grid->dim();
  out << "cell_index";
  for (std::size_t k = 0; k < n; ++k) out << ",component_" << k + 1;
  out << '\n';
  for (std::size_t c = 0; c < field.grid->cell_count(); ++c) {
    out << c;
    for (double v : field.at(c)) out << ',' << format_value(v);
    out << '\n';
  }
}

}  // namespace lipfree
