#include "cochange/bisection.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

namespace cochange {
namespace {

struct LocalGraph {
  std::vector<VertexId> members;  // sorted global ids; local index = position
  std::vector<std::vector<std::pair<int, Weight>>> adj;  // sorted by local index
  std::vector<std::array<int, 2>> edge_ends;             // local (a, b) with a < b
  std::vector<Weight> edge_weights;
};

LocalGraph make_local(const CoChangeGraph& graph, std::span<const VertexId> members) {
  LocalGraph local;
  local.members.assign(members.begin(), members.end());
  std::sort(local.members.begin(), local.members.end());
  local.adj.resize(local.members.size());

  auto local_index = [&](VertexId v) -> int {
    auto it = std::lower_bound(local.members.begin(), local.members.end(), v);
    if (it == local.members.end() || *it != v) return -1;
    return static_cast<int>(it - local.members.begin());
  };

  for (int a = 0; a < static_cast<int>(local.members.size()); ++a) {
    for (const auto& n : graph.neighbors(local.members[a])) {
      int b = local_index(n.vertex);
      if (b < 0) continue;
      local.adj[a].emplace_back(b, n.weight);
      if (b > a) {
        local.edge_ends.push_back({a, b});
        local.edge_weights.push_back(n.weight);
      }
    }
  }
  return local;
}

Weight weight_between_local(const LocalGraph& g, int a, int b) {
  const auto& list = g.adj[a];
  auto it = std::lower_bound(list.begin(), list.end(), b,
                             [](const std::pair<int, Weight>& n, int v) { return n.first < v; });
  if (it == list.end() || it->first != b) return 0;
  return it->second;
}

Weight cut_cost(const LocalGraph& g, const std::vector<std::uint8_t>& side) {
  Weight cost = 0;
  for (std::size_t e = 0; e < g.edge_ends.size(); ++e) {
    if (side[g.edge_ends[e][0]] != side[g.edge_ends[e][1]]) cost += g.edge_weights[e];
  }
  return cost;
}

std::size_t cut_edges(const LocalGraph& g, const std::vector<std::uint8_t>& side) {
  std::size_t count = 0;
  for (const auto& ends : g.edge_ends) {
    if (side[ends[0]] != side[ends[1]]) ++count;
  }
  return count;
}

// Exhaustive minimum over all balanced splits. Enumerates subsets of size
// floor(n/2) in lexicographic order; for even n the subset is constrained to
// contain vertex 0 so that each split is visited once. First optimum wins.
std::vector<std::uint8_t> exact_bisection(const LocalGraph& g) {
  const int n = static_cast<int>(g.members.size());
  const int k = n / 2;
  const bool pin_first = (n % 2 == 0);
  const int choose_k = pin_first ? k - 1 : k;
  const int pool = pin_first ? n - 1 : n;  // values 1..n-1 when pinned, else 0..n-1
  const int base = pin_first ? 1 : 0;

  std::vector<int> pick(choose_k);
  std::iota(pick.begin(), pick.end(), 0);

  std::vector<std::uint8_t> side(n), best_side;
  Weight best_cost = 0;
  bool have_best = false;

  while (true) {
    std::fill(side.begin(), side.end(), 1);
    if (pin_first) side[0] = 0;
    for (int idx : pick) side[base + idx] = 0;
    Weight cost = cut_cost(g, side);
    if (!have_best || cost < best_cost) {
      have_best = true;
      best_cost = cost;
      best_side = side;
    }

    if (choose_k == 0) break;
    int i = choose_k - 1;
    while (i >= 0 && pick[i] == pool - choose_k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < choose_k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best_side;
}

// One Kernighan-Lin pass of tentative pair swaps; returns true if the pass
// found a strictly improving prefix (already applied to `side`).
bool kl_pass(const LocalGraph& g, std::vector<std::uint8_t>& side) {
  const int n = static_cast<int>(g.members.size());
  std::vector<Weight> diff(n, 0);  // external minus internal incident weight
  for (int v = 0; v < n; ++v) {
    for (const auto& [u, w] : g.adj[v]) diff[v] += (side[u] != side[v]) ? w : -w;
  }

  std::vector<std::uint8_t> locked(n, 0);
  std::vector<std::pair<int, int>> swaps;
  Weight running = 0, best_running = 0;
  int best_prefix = -1;

  const int pair_budget = std::min(
      static_cast<int>(std::count(side.begin(), side.end(), 0)),
      static_cast<int>(std::count(side.begin(), side.end(), 1)));

  for (int step = 0; step < pair_budget; ++step) {
    int best_a = -1, best_b = -1;
    Weight best_gain = 0;
    bool have_pair = false;
    for (int a = 0; a < n; ++a) {
      if (locked[a] || side[a] != 0) continue;
      for (int b = 0; b < n; ++b) {
        if (locked[b] || side[b] != 1) continue;
        Weight gain = diff[a] + diff[b] - 2 * weight_between_local(g, a, b);
        if (!have_pair || gain > best_gain) {
          have_pair = true;
          best_gain = gain;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (!have_pair) break;

    side[best_a] = 1;
    side[best_b] = 0;
    locked[best_a] = locked[best_b] = 1;
    swaps.emplace_back(best_a, best_b);
    running += best_gain;
    if (running > best_running) {
      best_running = running;
      best_prefix = static_cast<int>(swaps.size()) - 1;
    }

    for (int v = 0; v < n; ++v) {
      if (locked[v]) continue;
      Weight wa = weight_between_local(g, v, best_a);
      Weight wb = weight_between_local(g, v, best_b);
      if (side[v] == 0) {
        diff[v] += 2 * wa - 2 * wb;
      } else {
        diff[v] += 2 * wb - 2 * wa;
      }
    }
  }

  // roll back swaps beyond the best prefix
  for (int i = static_cast<int>(swaps.size()) - 1; i > best_prefix; --i) {
    side[swaps[i].first] = 0;
    side[swaps[i].second] = 1;
  }
  return best_running > 0;
}

std::vector<std::uint8_t> kl_bisection(const LocalGraph& g, std::uint64_t seed) {
  const int n = static_cast<int>(g.members.size());
  const int zeros = n / 2;
  constexpr int kRestarts = 12;

  std::vector<std::uint8_t> best_side;
  Weight best_cost = 0;
  bool have_best = false;

  std::vector<int> order(n);
  for (int r = 0; r < kRestarts; ++r) {
    std::vector<std::uint8_t> side(n, 1);
    if (r == 0) {
      for (int i = 0; i < zeros; ++i) side[i] = 0;
    } else if (r == 1) {
      for (int i = 0, placed = 0; i < n && placed < zeros; i += 2, ++placed) side[i] = 0;
      // top up if alternation ran out of even slots
      for (int i = 1; std::count(side.begin(), side.end(), 0) < zeros && i < n; i += 2) side[i] = 0;
    } else {
      std::iota(order.begin(), order.end(), 0);
      std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r));
      for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[i], order[j]);
      }
      for (int i = 0; i < zeros; ++i) side[order[i]] = 0;
    }

    while (kl_pass(g, side)) {
    }
    Weight cost = cut_cost(g, side);
    if (!have_best || cost < best_cost) {
      have_best = true;
      best_cost = cost;
      best_side = side;
    }
  }
  return best_side;
}

}  // namespace

BisectionCut min_weight_bisection(const CoChangeGraph& graph, std::span<const VertexId> members,
                                  std::uint64_t seed) {
  BisectionCut result;
  if (members.size() < 2) {
    result.side.assign(members.size(), 0);
    return result;
  }

  LocalGraph local = make_local(graph, members);
  std::vector<std::uint8_t> side = local.members.size() <= kExactBisectionLimit
                                       ? exact_bisection(local)
                                       : kl_bisection(local, seed);
  result.cut_weight = cut_cost(local, side);
  result.cut_edge_count = cut_edges(local, side);

  // map sides back to the caller's member order
  result.side.resize(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto it = std::lower_bound(local.members.begin(), local.members.end(), members[i]);
    result.side[i] = side[static_cast<std::size_t>(it - local.members.begin())];
  }
  return result;
}

}  // namespace cochange
