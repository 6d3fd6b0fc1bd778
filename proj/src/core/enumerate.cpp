#include "verlinde/error.hpp"
#include "verlinde/graph.hpp"

#include <map>

namespace verlinde {

namespace {

bool stable(int genus, int valence) { return 2 * genus - 2 + valence > 0; }

// All graphs obtained from g by one degeneration at vertex v: a new
// self-loop, or a split of v into two vertices joined by a new edge.
template <class Emit>
void degenerate(const StableGraph& g, int v, Emit&& emit) {
  if (g.genus[v] >= 1) {
    StableGraph h = g;
    --h.genus[v];
    h.edges.push_back({v, v});
    emit(std::move(h));
  }

  // Items at v: legs (index i) and half-edges (edge e, side s).
  struct Item {
    bool leg;
    int index;
    int side;
  };
  std::vector<Item> items;
  for (int i = 0; i < g.num_legs(); ++i)
    if (g.leg_vertex[i] == v) items.push_back({true, i, 0});
  for (int e = 0; e < g.num_edges(); ++e)
    for (int s = 0; s < 2; ++s)
      if (g.edges[e][s] == v) items.push_back({false, e, s});

  const int w = g.num_vertices();
  const int m = static_cast<int>(items.size());
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    int moved = __builtin_popcount(mask);
    for (int g1 = 0; g1 <= g.genus[v]; ++g1) {
      int g2 = g.genus[v] - g1;
      if (!stable(g1, m - moved + 1) || !stable(g2, moved + 1)) continue;
      StableGraph h = g;
      h.genus[v] = g1;
      h.genus.push_back(g2);
      for (int k = 0; k < m; ++k) {
        if (!(mask >> k & 1)) continue;
        const Item& it = items[k];
        if (it.leg)
          h.leg_vertex[it.index] = w;
        else
          h.edges[it.index][it.side] = w;
      }
      h.edges.push_back({v, w});
      emit(std::move(h));
    }
  }
}

}  // namespace

std::vector<StableGraph> enumerate_stable_graphs(int g, int n, int max_edges) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0)
    throw InvalidInput("unstable type (g,n) = (" + std::to_string(g) + "," + std::to_string(n) +
                       ")");
  if (max_edges < 0) throw InvalidInput("max_edges must be nonnegative");

  std::map<GraphKey, StableGraph> all;
  std::vector<StableGraph> frontier{trivial_graph(g, n)};
  all.emplace(canonical_key(frontier.front()), frontier.front());
  for (int k = 1; k <= max_edges && !frontier.empty(); ++k) {
    std::vector<StableGraph> next;
    for (const auto& graph : frontier)
      for (int v = 0; v < graph.num_vertices(); ++v)
        degenerate(graph, v, [&](StableGraph h) {
          Canonization c = canonize(h);
          if (all.count(c.key)) return;
          next.push_back(c.graph);
          all.emplace(std::move(c.key), std::move(c.graph));
        });
    frontier = std::move(next);
  }

  std::vector<StableGraph> out;
  out.reserve(all.size());
  for (auto& [key, graph] : all) out.push_back(std::move(graph));
  return out;
}

}  // namespace verlinde
