#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "lipfree/error.hpp"
#include "lipfree/lp_core.hpp"

namespace lipfree {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

void validate(const FlowNetwork& net) {
  const std::size_t n = net.supply.size();
  double total = 0.0;
  double magnitude = 0.0;
  for (double b : net.supply) {
    if (!std::isfinite(b)) throw InvalidInput("node supplies must be finite");
    total += b;
    magnitude += std::abs(b);
  }
  if (std::abs(total) > 1e-9 * std::max(1.0, magnitude)) throw InvalidInput("node supplies are not balanced");
  for (const auto& a : net.arcs) {
    if (a.tail >= n || a.head >= n) throw InvalidInput("arc endpoint out of range");
    if (!(a.cost >= 0.0) || !std::isfinite(a.cost)) throw InvalidInput("arc costs must be finite and nonnegative");
  }
}

// Primal network simplex on the uncapacitated problem with an artificial
// root (big-M start), keeping a strongly feasible spanning tree so that
// degenerate pivots cannot cycle.
class NetworkSimplexSolver {
 public:
  explicit NetworkSimplexSolver(const FlowNetwork& net)
      : n_(net.supply.size()), m_(net.arcs.size()), root_(n_) {
    const std::size_t total = m_ + n_;
    tail_.resize(total);
    head_.resize(total);
    cost_.resize(total);
    flow_.assign(total, 0.0);
    in_tree_.assign(total, 0);
    double max_cost = 0.0;
    for (std::size_t a = 0; a < m_; ++a) {
      tail_[a] = net.arcs[a].tail;
      head_[a] = net.arcs[a].head;
      cost_[a] = net.arcs[a].cost;
      max_cost = std::max(max_cost, cost_[a]);
    }
    const double big_m = 1.0 + static_cast<double>(n_ + 1) * max_cost;
    rc_eps_ = 1e-12 * (1.0 + big_m);

    parent_.assign(n_ + 1, kNone);
    pred_.assign(n_ + 1, kNone);
    depth_.assign(n_ + 1, 0);
    pot_.assign(n_ + 1, 0.0);
    first_child_.assign(n_ + 1, kNone);
    next_sib_.assign(n_ + 1, kNone);
    prev_sib_.assign(n_ + 1, kNone);
    supply_scale_ = 1.0;
    for (std::size_t v = 0; v < n_; ++v) {
      const std::size_t a = m_ + v;
      const double b = net.supply[v];
      supply_scale_ = std::max(supply_scale_, std::abs(b));
      cost_[a] = big_m;
      if (b >= 0.0) {
        tail_[a] = v;
        head_[a] = root_;
        flow_[a] = b;
        pot_[v] = -big_m;
      } else {
        tail_[a] = root_;
        head_[a] = v;
        flow_[a] = -b;
        pot_[v] = big_m;
      }
      in_tree_[a] = 1;
      parent_[v] = root_;
      pred_[v] = a;
      depth_[v] = 1;
      attach(v, root_);
    }
    block_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(total))));
  }

  McfSolution run() {
    for (;;) {
      const std::size_t entering = find_entering();
      if (entering == kNone) break;
      pivot(entering);
    }
    McfSolution sol;
    const double feasibility = 1e-9 * supply_scale_;
    for (std::size_t v = 0; v < n_; ++v) {
      if (flow_[m_ + v] > feasibility) {
        sol.status = McfStatus::Infeasible;
        return sol;
      }
    }
    sol.status = McfStatus::Optimal;
    sol.flow.assign(flow_.begin(), flow_.begin() + static_cast<std::ptrdiff_t>(m_));
    for (std::size_t a = 0; a < m_; ++a) sol.value += cost_[a] * sol.flow[a];
    return sol;
  }

 private:
  double reduced_cost(std::size_t a) const { return cost_[a] + pot_[tail_[a]] - pot_[head_[a]]; }

  std::size_t find_entering() {
    const std::size_t total = m_ + n_;
    std::size_t best = kNone;
    double best_rc = -rc_eps_;
    std::size_t count = 0;
    for (std::size_t k = 0; k < total; ++k) {
      const std::size_t a = next_arc_;
      next_arc_ = next_arc_ + 1 == total ? 0 : next_arc_ + 1;
      if (!in_tree_[a]) {
        const double rc = reduced_cost(a);
        if (rc < best_rc) {
          best_rc = rc;
          best = a;
        }
      }
      if (++count == block_) {
        if (best != kNone) return best;
        count = 0;
      }
    }
    return best;
  }

  void attach(std::size_t child, std::size_t parent) {
    prev_sib_[child] = kNone;
    next_sib_[child] = first_child_[parent];
    if (first_child_[parent] != kNone) prev_sib_[first_child_[parent]] = child;
    first_child_[parent] = child;
  }

  void detach(std::size_t child, std::size_t parent) {
    if (prev_sib_[child] != kNone) {
      next_sib_[prev_sib_[child]] = next_sib_[child];
    } else {
      first_child_[parent] = next_sib_[child];
    }
    if (next_sib_[child] != kNone) prev_sib_[next_sib_[child]] = prev_sib_[child];
    prev_sib_[child] = next_sib_[child] = kNone;
  }

  void pivot(std::size_t entering) {
    const std::size_t u = tail_[entering];
    const std::size_t v = head_[entering];
    const double rc = reduced_cost(entering);

    std::size_t a = u;
    std::size_t b = v;
    while (a != b) {
      if (depth_[a] > depth_[b]) {
        a = parent_[a];
      } else if (depth_[b] > depth_[a]) {
        b = parent_[b];
      } else {
        a = parent_[a];
        b = parent_[b];
      }
    }
    const std::size_t join = a;

    // The cycle runs join -> u, across the entering arc, then v -> join.
    // Among blocking arcs the last one met in that order leaves.
    double delta = kInf;
    std::size_t leaving = kNone;
    bool tail_side = true;
    for (std::size_t x = u; x != join; x = parent_[x]) {
      const std::size_t arc = pred_[x];
      if (tail_[arc] == x && flow_[arc] < delta) {
        delta = flow_[arc];
        leaving = x;
      }
    }
    for (std::size_t x = v; x != join; x = parent_[x]) {
      const std::size_t arc = pred_[x];
      if (head_[arc] == x && flow_[arc] <= delta) {
        delta = flow_[arc];
        leaving = x;
        tail_side = false;
      }
    }
    if (leaving == kNone) throw std::logic_error("network simplex found an unbounded cycle");

    if (delta > 0.0) {
      flow_[entering] += delta;
      for (std::size_t x = u; x != join; x = parent_[x]) {
        const std::size_t arc = pred_[x];
        flow_[arc] += tail_[arc] == x ? -delta : delta;
      }
      for (std::size_t x = v; x != join; x = parent_[x]) {
        const std::size_t arc = pred_[x];
        flow_[arc] += head_[arc] == x ? -delta : delta;
      }
    }
    const std::size_t leaving_arc = pred_[leaving];
    flow_[leaving_arc] = 0.0;
    in_tree_[leaving_arc] = 0;
    in_tree_[entering] = 1;

    // Re-hang the subtree cut off at `leaving`, rooted at the entering
    // arc's endpoint on that side.
    const std::size_t inner = tail_side ? u : v;
    const std::size_t outer = tail_side ? v : u;
    std::size_t cur = inner;
    std::size_t new_parent = outer;
    std::size_t new_pred = entering;
    for (;;) {
      const std::size_t old_parent = parent_[cur];
      const std::size_t old_pred = pred_[cur];
      detach(cur, old_parent);
      parent_[cur] = new_parent;
      pred_[cur] = new_pred;
      attach(cur, new_parent);
      if (cur == leaving) break;
      new_parent = cur;
      new_pred = old_pred;
      cur = old_parent;
    }

    const double shift = inner == v ? rc : -rc;
    stack_.clear();
    stack_.push_back(inner);
    while (!stack_.empty()) {
      const std::size_t x = stack_.back();
      stack_.pop_back();
      pot_[x] += shift;
      depth_[x] = depth_[parent_[x]] + 1;
      for (std::size_t c = first_child_[x]; c != kNone; c = next_sib_[c]) stack_.push_back(c);
    }
  }

  std::size_t n_;
  std::size_t m_;
  std::size_t root_;
  std::vector<std::size_t> tail_, head_;
  Vec cost_, flow_;
  std::vector<std::uint8_t> in_tree_;
  std::vector<std::size_t> parent_, pred_, depth_;
  Vec pot_;
  std::vector<std::size_t> first_child_, next_sib_, prev_sib_;
  std::vector<std::size_t> stack_;
  std::size_t next_arc_ = 0;
  std::size_t block_ = 10;
  double rc_eps_ = 0.0;
  double supply_scale_ = 1.0;
};

}  // namespace

McfSolution network_simplex(const FlowNetwork& network) {
  validate(network);
  return NetworkSimplexSolver(network).run();
}

McfSolution mcf_solve(const FlowNetwork& network, McfMethod method) {
  return method == McfMethod::NetworkSimplex ? network_simplex(network) : successive_shortest_paths(network);
}

}  // namespace lipfree
