#include <cstdlib>
#include <numeric>
#include <string>

#include "lipfree/beckmann.hpp"
#include "lipfree/error.hpp"

namespace lipfree {
namespace {

bool lex_positive(const std::vector<int>& v) {
  for (int c : v) {
    if (c != 0) return c > 0;
  }
  return false;
}

// Lexicographically positive primitive vectors of {-r..r}^n.
std::vector<std::vector<int>> cube_offsets(std::size_t n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(n, -r);
  for (;;) {
    int g = 0;
    for (int c : v) g = std::gcd(g, std::abs(c));
    if (g == 1 && lex_positive(v)) out.push_back(v);
    std::size_t k = n;
    while (k-- > 0) {
      if (++v[k] <= r) break;
      v[k] = -r;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

// Farey-type refinement of the quarter turn from (1,0) to (0,1): after L
// rounds of mediant insertion there are 2^L directions in [ (1,0), (0,1) ).
std::vector<std::vector<int>> stern_brocot_offsets(int facets) {
  int levels = 0;
  while ((4 << levels) < facets) ++levels;
  if ((4 << levels) != facets) {
    throw InvalidInput("l2 stencil in 2D needs facets = 4 * 2^L, got " + std::to_string(facets));
  }
  std::vector<std::vector<int>> quarter = {{1, 0}, {0, 1}};
  for (int l = 0; l < levels; ++l) {
    std::vector<std::vector<int>> next;
    for (std::size_t i = 0; i + 1 < quarter.size(); ++i) {
      next.push_back(quarter[i]);
      next.push_back({quarter[i][0] + quarter[i + 1][0], quarter[i][1] + quarter[i + 1][1]});
    }
    next.push_back(quarter.back());
    quarter = std::move(next);
  }
  quarter.pop_back();
  // Rotating the quarter by 90 degrees once more gives a half turn, which
  // together with negation covers the circle.
  std::vector<std::vector<int>> out;
  for (const auto& v : quarter) {
    out.push_back(v);
    const std::vector<int> rotated = {-v[1], v[0]};
    out.push_back(lex_positive(rotated) ? rotated : std::vector<int>{v[1], -v[0]});
  }
  return out;
}

}  // namespace

Stencil make_stencil(const NormSpec& norm, std::size_t dim, int facets) {
  if (dim == 0) throw InvalidInput("stencil needs a positive dimension");
  if (facets < 4) throw InvalidInput("stencil needs at least 4 facets");
  Stencil s;
  if (dim == 1) {
    s.offsets = {{1}};
    return s;
  }
  switch (norm.kind()) {
    case NormKind::L1:
      for (std::size_t k = 0; k < dim; ++k) {
        std::vector<int> e(dim, 0);
        e[k] = 1;
        s.offsets.push_back(e);
      }
      break;
    case NormKind::Linf:
      s.offsets = cube_offsets(dim, 1);
      break;
    case NormKind::L2:
    case NormKind::Polyhedral:
      if (dim == 2) {
        s.offsets = stern_brocot_offsets(facets);
      } else {
        s.offsets = cube_offsets(dim, facets > 26 ? 2 : 1);
      }
      break;
  }
  return s;
}

}  // namespace lipfree
