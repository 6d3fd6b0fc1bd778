#include "verlinde/graph.hpp"

#include "verlinde/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace verlinde {

int StableGraph::valence(int v) const {
  int n = 0;
  for (const auto& e : edges) n += (e[0] == v) + (e[1] == v);
  for (int lv : leg_vertex) n += (lv == v);
  return n;
}

int StableGraph::arithmetic_genus() const {
  return std::accumulate(genus.begin(), genus.end(), 0) + h1();
}

bool StableGraph::is_connected() const {
  const int V = num_vertices();
  if (V == 0) return false;
  std::vector<int> parent(V);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = V;
  for (const auto& e : edges) {
    int a = find(e[0]), b = find(e[1]);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

bool StableGraph::is_tree() const {
  for (const auto& e : edges)
    if (e[0] == e[1]) return false;
  return num_edges() == num_vertices() - 1;
}

void StableGraph::validate() const {
  const int V = num_vertices();
  if (V == 0) throw InvalidInput("graph has no vertices");
  for (int gv : genus)
    if (gv < 0) throw InvalidInput("negative vertex genus");
  for (int lv : leg_vertex)
    if (lv < 0 || lv >= V) throw InvalidInput("leg attached to a nonexistent vertex");
  for (const auto& e : edges)
    if (e[0] < 0 || e[0] >= V || e[1] < 0 || e[1] >= V)
      throw InvalidInput("edge attached to a nonexistent vertex");
  if (!is_connected()) throw InvalidInput("graph is not connected");
  for (int v = 0; v < V; ++v)
    if (2 * genus[v] - 2 + valence(v) <= 0)
      throw InvalidInput("vertex " + std::to_string(v) + " is unstable");
}

StableGraph trivial_graph(int g, int n) {
  return StableGraph{{g}, std::vector<int>(n, 0), {}};
}

DecoratedGraph DecoratedGraph::undecorated(StableGraph g) {
  DecoratedGraph d;
  d.hpsi.assign(g.edges.size(), {0, 0});
  d.lpsi.assign(g.leg_vertex.size(), 0);
  d.graph = std::move(g);
  return d;
}

int DecoratedGraph::degree() const {
  int d = graph.num_edges();
  for (const auto& h : hpsi) d += h[0] + h[1];
  for (int k : lpsi) d += k;
  return d;
}

void DecoratedGraph::validate() const {
  graph.validate();
  if (hpsi.size() != graph.edges.size() || lpsi.size() != graph.leg_vertex.size())
    throw InvalidInput("decoration does not match the graph shape");
  for (const auto& h : hpsi)
    if (h[0] < 0 || h[1] < 0) throw InvalidInput("negative psi exponent");
  for (int k : lpsi)
    if (k < 0) throw InvalidInput("negative psi exponent");
}

namespace {

// Key of the graph relabeled by `pos` (old vertex -> new position); fills
// the induced half-edge map when requested.
GraphKey encode(const StableGraph& g, const std::vector<int>& pos, HalfEdgeMap* map) {
  const int V = g.num_vertices(), E = g.num_edges(), n = g.num_legs();
  GraphKey key;
  key.reserve(3 + V + n + 2 * E);
  key.push_back(E);
  key.push_back(V);
  key.push_back(n);
  std::vector<int> genus(V);
  for (int v = 0; v < V; ++v) genus[pos[v]] = g.genus[v];
  key.insert(key.end(), genus.begin(), genus.end());
  for (int lv : g.leg_vertex) key.push_back(pos[lv]);

  std::vector<std::tuple<int, int, int>> edges;  // (a, b, original index)
  edges.reserve(E);
  std::vector<std::uint8_t> flip(E, 0);
  for (int e = 0; e < E; ++e) {
    int a = pos[g.edges[e][0]], b = pos[g.edges[e][1]];
    if (a > b) {
      std::swap(a, b);
      flip[e] = 1;
    }
    edges.emplace_back(a, b, e);
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& [a, b, e] : edges) {
    key.push_back(a);
    key.push_back(b);
  }
  if (map) {
    map->vertex = pos;
    map->edge.assign(E, 0);
    for (int i = 0; i < E; ++i) map->edge[std::get<2>(edges[i])] = i;
    map->flip = std::move(flip);
  }
  return key;
}

StableGraph decode(const GraphKey& key) {
  StableGraph g;
  const int E = key[0], V = key[1], n = key[2];
  std::size_t i = 3;
  g.genus.assign(key.begin() + i, key.begin() + i + V);
  i += V;
  g.leg_vertex.assign(key.begin() + i, key.begin() + i + n);
  i += n;
  for (int e = 0; e < E; ++e, i += 2) g.edges.push_back({key[i], key[i + 1]});
  return g;
}

// Vertices sorted by an isomorphism invariant; cells are runs of equal
// invariants.
struct Partition {
  std::vector<int> order;
  std::vector<std::pair<int, int>> cells;  // [begin, end) into order
};

Partition partition_vertices(const StableGraph& g) {
  const int V = g.num_vertices();
  std::vector<std::vector<int>> inv(V);
  std::vector<std::vector<int>> legs(V);
  for (int i = 0; i < g.num_legs(); ++i) legs[g.leg_vertex[i]].push_back(i);
  std::vector<int> loops(V, 0);
  for (const auto& e : g.edges)
    if (e[0] == e[1]) ++loops[e[0]];
  for (int v = 0; v < V; ++v) {
    // Vertices with legs first, ordered by their smallest leg.
    inv[v] = {legs[v].empty() ? 1 : 0, legs[v].empty() ? 0 : legs[v].front(), g.genus[v],
              g.valence(v), loops[v]};
  }
  Partition p;
  p.order.resize(V);
  std::iota(p.order.begin(), p.order.end(), 0);
  std::stable_sort(p.order.begin(), p.order.end(),
                   [&](int a, int b) { return inv[a] < inv[b]; });
  for (int i = 0; i < V;) {
    int j = i + 1;
    while (j < V && inv[p.order[j]] == inv[p.order[i]]) ++j;
    p.cells.emplace_back(i, j);
    i = j;
  }
  return p;
}

// Calls visit(pos) for every vertex relabeling that maps each cell onto its
// own block of positions.
template <class Visit>
void for_each_cell_permutation(const StableGraph& g, Visit&& visit) {
  Partition p = partition_vertices(g);
  std::vector<int> order = p.order;
  std::vector<int> pos(g.num_vertices());
  // Each cell starts sorted so next_permutation walks all orderings.
  for (auto [b, e] : p.cells) std::sort(order.begin() + b, order.begin() + e);
  auto recurse = [&](auto&& self, std::size_t cell) -> void {
    if (cell == p.cells.size()) {
      for (int i = 0; i < static_cast<int>(order.size()); ++i) pos[order[i]] = i;
      visit(pos);
      return;
    }
    auto [b, e] = p.cells[cell];
    do {
      self(self, cell + 1);
    } while (std::next_permutation(order.begin() + b, order.begin() + e));
  };
  recurse(recurse, 0);
}

std::size_t edge_kernel_order(const StableGraph& canonical) {
  std::size_t order = 1;
  const auto& E = canonical.edges;
  for (std::size_t i = 0; i < E.size();) {
    std::size_t j = i + 1;
    while (j < E.size() && E[j] == E[i]) ++j;
    std::size_t m = j - i;
    for (std::size_t k = 2; k <= m; ++k) order *= k;
    if (E[i][0] == E[i][1]) order <<= m;
    i = j;
  }
  return order;
}

}  // namespace

Canonization canonize(const StableGraph& g) {
  Canonization best;
  std::size_t matches = 0;
  for_each_cell_permutation(g, [&](const std::vector<int>& pos) {
    HalfEdgeMap map;
    GraphKey key = encode(g, pos, &map);
    if (matches == 0 || key < best.key) {
      best.key = std::move(key);
      best.to_canonical = std::move(map);
      matches = 1;
    } else if (key == best.key) {
      ++matches;
    }
  });
  best.graph = decode(best.key);
  best.automorphism_order = matches * edge_kernel_order(best.graph);
  return best;
}

StableGraph canonical_form(const StableGraph& g) { return canonize(g).graph; }

GraphKey canonical_key(const StableGraph& g) { return canonize(g).key; }

std::vector<HalfEdgeMap> automorphisms(const StableGraph& g) {
  const int E = g.num_edges();
  // Orderings that produce the same encoding as a reference ordering differ
  // from it by an automorphism.
  std::vector<int> reference_inverse;
  GraphKey reference_key;

  // Parallel classes of edges keyed by their unordered endpoints.
  std::map<std::pair<int, int>, std::vector<int>> classes;
  for (int e = 0; e < E; ++e) {
    auto [a, b] = g.edges[e];
    classes[{std::min(a, b), std::max(a, b)}].push_back(e);
  }

  std::vector<HalfEdgeMap> result;
  for_each_cell_permutation(g, [&](const std::vector<int>& order_pos) {
    if (reference_inverse.empty()) {
      reference_key = encode(g, order_pos, nullptr);
      reference_inverse.resize(order_pos.size());
      for (std::size_t v = 0; v < order_pos.size(); ++v) reference_inverse[order_pos[v]] = v;
    } else if (encode(g, order_pos, nullptr) != reference_key) {
      return;
    }
    std::vector<int> pos(order_pos.size());
    for (std::size_t v = 0; v < pos.size(); ++v) pos[v] = reference_inverse[order_pos[v]];
    // For each class, every bijection onto the image class, plus free flips
    // on self-loops.
    using Option = std::vector<std::pair<int, std::uint8_t>>;  // per source edge
    std::vector<std::pair<const std::vector<int>*, std::vector<Option>>> choices;
    for (const auto& [ends, members] : classes) {
      int a = pos[ends.first], b = pos[ends.second];
      const auto& targets = classes.at({std::min(a, b), std::max(a, b)});
      std::vector<int> perm = targets;
      std::sort(perm.begin(), perm.end());
      std::vector<Option> opts;
      const bool loop = ends.first == ends.second;
      const int m = static_cast<int>(members.size());
      do {
        for (int flips = 0; flips < (loop ? (1 << m) : 1); ++flips) {
          Option o;
          for (int i = 0; i < m; ++i) {
            int src = members[i], dst = perm[i];
            std::uint8_t f = loop ? std::uint8_t((flips >> i) & 1)
                                  : std::uint8_t(pos[g.edges[src][0]] != g.edges[dst][0]);
            o.emplace_back(dst, f);
          }
          opts.push_back(std::move(o));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      choices.emplace_back(&members, std::move(opts));
    }
    HalfEdgeMap map{pos, std::vector<int>(E), std::vector<std::uint8_t>(E)};
    auto recurse = [&](auto&& self, std::size_t c) -> void {
      if (c == choices.size()) {
        result.push_back(map);
        return;
      }
      const auto& members = *choices[c].first;
      for (const auto& opt : choices[c].second) {
        for (std::size_t i = 0; i < members.size(); ++i) {
          map.edge[members[i]] = opt[i].first;
          map.flip[members[i]] = opt[i].second;
        }
        self(self, c + 1);
      }
    };
    recurse(recurse, 0);
  });
  return result;
}

std::size_t automorphism_order(const StableGraph& g) { return canonize(g).automorphism_order; }

DecoratedGraph transport(const DecoratedGraph& d, const StableGraph& target,
                         const HalfEdgeMap& map) {
  DecoratedGraph out;
  out.graph = target;
  out.lpsi = d.lpsi;
  out.hpsi.assign(d.hpsi.size(), {0, 0});
  for (std::size_t e = 0; e < d.hpsi.size(); ++e)
    for (int s = 0; s < 2; ++s) out.hpsi[map.edge[e]][s ^ map.flip[e]] = d.hpsi[e][s];
  return out;
}

DecorationCanonicalizer::DecorationCanonicalizer(StableGraph canonical_graph)
    : graph_(std::move(canonical_graph)), automorphisms_(automorphisms(graph_)) {}

DecoratedGraph DecorationCanonicalizer::canonical(std::vector<std::array<int, 2>> hpsi,
                                                  std::vector<int> lpsi) const {
  std::vector<std::array<int, 2>> best = hpsi;
  std::vector<std::array<int, 2>> image(hpsi.size());
  for (const auto& a : automorphisms_) {
    for (std::size_t e = 0; e < hpsi.size(); ++e)
      for (int s = 0; s < 2; ++s) image[a.edge[e]][s ^ a.flip[e]] = hpsi[e][s];
    if (image < best) best = image;
  }
  return DecoratedGraph{graph_, std::move(best), std::move(lpsi)};
}

DecoratedGraph canonical_form(const DecoratedGraph& d) {
  Canonization c = canonize(d.graph);
  DecoratedGraph moved = transport(d, c.graph, c.to_canonical);
  return DecorationCanonicalizer(std::move(c.graph))
      .canonical(std::move(moved.hpsi), std::move(moved.lpsi));
}

GraphKey decorated_key(const DecoratedGraph& canonical) {
  std::vector<int> pos(canonical.graph.num_vertices());
  std::iota(pos.begin(), pos.end(), 0);
  GraphKey key = encode(canonical.graph, pos, nullptr);
  for (const auto& h : canonical.hpsi) {
    key.push_back(h[0]);
    key.push_back(h[1]);
  }
  key.insert(key.end(), canonical.lpsi.begin(), canonical.lpsi.end());
  return key;
}

std::size_t automorphism_order(const DecoratedGraph& d) {
  std::size_t count = 0;
  for (const auto& a : automorphisms(d.graph))
    if (transport(d, d.graph, a).hpsi == d.hpsi) ++count;
  return count;
}

std::string to_string(Locus locus) {
  switch (locus) {
    case Locus::smooth:
      return "smooth";
    case Locus::rational_tails:
      return "rational_tails";
    case Locus::compact_type:
      return "compact_type";
    case Locus::general:
      return "general";
  }
  return "general";
}

Locus parse_locus(const std::string& name) {
  for (Locus l : {Locus::smooth, Locus::rational_tails, Locus::compact_type, Locus::general})
    if (to_string(l) == name) return l;
  if (name == "full") return Locus::general;
  throw InvalidInput("unknown locus '" + name + "'");
}

Locus classify_locus(const StableGraph& graph, int g) {
  if (graph.num_edges() == 0) return Locus::smooth;
  if (!graph.is_tree()) return Locus::general;
  for (int gv : graph.genus)
    if (gv == g) return Locus::rational_tails;
  return Locus::compact_type;
}

bool lies_in(const StableGraph& graph, int g, Locus locus) {
  return static_cast<int>(classify_locus(graph, g)) <= static_cast<int>(locus);
}

std::vector<TwoLoop> two_loop_graphs(int g, int n) {
  std::vector<TwoLoop> out;
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0) return out;
  for (auto& graph : enumerate_stable_graphs(g, n, 2)) {
    if (graph.num_vertices() != 2 || graph.num_edges() != 2) continue;
    if (graph.edges[0][0] == graph.edges[0][1] || graph.edges[1][0] == graph.edges[1][1])
      continue;
    int legs0 = static_cast<int>(std::count(graph.leg_vertex.begin(), graph.leg_vertex.end(), 0));
    bool even = legs0 % 2 == 0 && (n - legs0) % 2 == 0;
    out.push_back({std::move(graph), even});
  }
  return out;
}

std::string describe(const StableGraph& g) {
  DecoratedGraph d = DecoratedGraph::undecorated(g);
  return describe(d);
}

std::string describe(const DecoratedGraph& d) {
  std::ostringstream os;
  const auto& g = d.graph;
  os << '[';
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (v) os << ' ';
    os << 'g' << g.genus[v] << '{';
    bool first = true;
    for (int i = 0; i < g.num_legs(); ++i) {
      if (g.leg_vertex[i] != v) continue;
      if (!first) os << ',';
      first = false;
      os << i + 1;
      if (d.lpsi[i]) os << '^' << d.lpsi[i];
    }
    os << '}';
  }
  if (g.num_edges()) os << " |";
  for (int e = 0; e < g.num_edges(); ++e) {
    os << ' ' << g.edges[e][0] << '-' << g.edges[e][1];
    if (d.hpsi[e][0] || d.hpsi[e][1]) os << '^' << d.hpsi[e][0] << ',' << d.hpsi[e][1];
  }
  os << ']';
  return os.str();
}

}  // namespace verlinde
