#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <utility>

#include "lipfree/error.hpp"
#include "lipfree/lp_core.hpp"

namespace lipfree {

// Successive shortest augmenting paths with Dijkstra on reduced costs; the
// reference mode for the network simplex.
McfSolution successive_shortest_paths(const FlowNetwork& network) {
  const std::size_t n = network.supply.size();
  const std::size_t m = network.arcs.size();
  double magnitude = 0.0;
  double total = 0.0;
  for (double b : network.supply) {
    if (!std::isfinite(b)) throw InvalidInput("node supplies must be finite");
    magnitude += std::abs(b);
    total += b;
  }
  if (std::abs(total) > 1e-9 * std::max(1.0, magnitude)) throw InvalidInput("node supplies are not balanced");
  for (const auto& a : network.arcs) {
    if (a.tail >= n || a.head >= n) throw InvalidInput("arc endpoint out of range");
    if (!(a.cost >= 0.0) || !std::isfinite(a.cost)) throw InvalidInput("arc costs must be finite and nonnegative");
  }

  std::vector<std::size_t> out_start(n + 1, 0), in_start(n + 1, 0);
  for (const auto& a : network.arcs) {
    ++out_start[a.tail + 1];
    ++in_start[a.head + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    out_start[v + 1] += out_start[v];
    in_start[v + 1] += in_start[v];
  }
  std::vector<std::size_t> out_arcs(m), in_arcs(m);
  {
    std::vector<std::size_t> out_fill(out_start.begin(), out_start.end() - 1);
    std::vector<std::size_t> in_fill(in_start.begin(), in_start.end() - 1);
    for (std::size_t a = 0; a < m; ++a) {
      out_arcs[out_fill[network.arcs[a].tail]++] = a;
      in_arcs[in_fill[network.arcs[a].head]++] = a;
    }
  }

  const double tol = 1e-12 * std::max(1.0, magnitude);
  Vec excess = network.supply;
  Vec flow(m, 0.0);
  Vec pot(n, 0.0);
  Vec dist(n);
  std::vector<std::size_t> prev_arc(n);
  std::vector<char> prev_backward(n);
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  using Entry = std::pair<double, std::size_t>;

  McfSolution sol;
  for (;;) {
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    std::fill(dist.begin(), dist.end(), kInf);
    for (std::size_t v = 0; v < n; ++v) {
      if (excess[v] > tol) {
        dist[v] = 0.0;
        prev_arc[v] = kNone;
        queue.emplace(0.0, v);
      }
    }
    if (queue.empty()) break;
    std::size_t target = kNone;
    while (!queue.empty()) {
      const auto [d, x] = queue.top();
      queue.pop();
      if (d > dist[x]) continue;
      if (excess[x] < -tol) {
        target = x;
        break;
      }
      for (std::size_t k = out_start[x]; k < out_start[x + 1]; ++k) {
        const std::size_t a = out_arcs[k];
        const std::size_t y = network.arcs[a].head;
        const double nd = d + std::max(0.0, network.arcs[a].cost + pot[x] - pot[y]);
        if (nd < dist[y]) {
          dist[y] = nd;
          prev_arc[y] = a;
          prev_backward[y] = 0;
          queue.emplace(nd, y);
        }
      }
      for (std::size_t k = in_start[x]; k < in_start[x + 1]; ++k) {
        const std::size_t a = in_arcs[k];
        if (flow[a] <= tol) continue;
        const std::size_t y = network.arcs[a].tail;
        const double nd = d + std::max(0.0, -network.arcs[a].cost + pot[x] - pot[y]);
        if (nd < dist[y]) {
          dist[y] = nd;
          prev_arc[y] = a;
          prev_backward[y] = 1;
          queue.emplace(nd, y);
        }
      }
    }
    if (target == kNone) {
      sol.status = McfStatus::Infeasible;
      return sol;
    }
    const double reach = dist[target];
    for (std::size_t v = 0; v < n; ++v) pot[v] += std::min(dist[v], reach);

    double delta = -excess[target];
    std::size_t x = target;
    while (prev_arc[x] != kNone) {
      const std::size_t a = prev_arc[x];
      if (prev_backward[x]) {
        delta = std::min(delta, flow[a]);
        x = network.arcs[a].head;
      } else {
        x = network.arcs[a].tail;
      }
    }
    delta = std::min(delta, excess[x]);
    excess[x] -= delta;
    excess[target] += delta;
    for (std::size_t y = target; prev_arc[y] != kNone;) {
      const std::size_t a = prev_arc[y];
      if (prev_backward[y]) {
        flow[a] -= delta;
        if (flow[a] < tol) flow[a] = 0.0;
        y = network.arcs[a].head;
      } else {
        flow[a] += delta;
        y = network.arcs[a].tail;
      }
    }
  }
  sol.status = McfStatus::Optimal;
  sol.flow = std::move(flow);
  for (std::size_t a = 0; a < m; ++a) sol.value += network.arcs[a].cost * sol.flow[a];
  return sol;
}

}  // namespace lipfree
