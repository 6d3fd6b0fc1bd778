#include "verlinde/verify/oracles.hpp"

#include "verlinde/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace verlinde::oracle {

namespace {

using Element = std::vector<Integer>;  // coefficients in the label basis

Element multiply(const FusionDatum& datum, const Element& x, const Element& y) {
  const int L = datum.size();
  Element out(L, 0);
  for (Label a = 0; a < L; ++a) {
    if (x[a] == 0) continue;
    for (Label b = 0; b < L; ++b) {
      if (y[b] == 0) continue;
      for (Label c = 0; c < L; ++c)
        if (int k = datum.n3(a, b, datum.dual(c)); k) out[c] += x[a] * y[b] * k;
    }
  }
  return out;
}

Element basis(const FusionDatum& datum, Label a) {
  Element e(datum.size(), 0);
  e[a] = 1;
  return e;
}

}  // namespace

Integer fusion_ring_rank(const FusionDatum& datum, int g, std::span<const Label> labels) {
  Element handle(datum.size(), 0);
  for (Label v = 0; v < datum.size(); ++v) {
    Element t = multiply(datum, basis(datum, v), basis(datum, datum.dual(v)));
    for (Label c = 0; c < datum.size(); ++c) handle[c] += t[c];
  }
  Element x = basis(datum, datum.unit());
  for (Label a : labels) x = multiply(datum, x, basis(datum, a));
  for (int k = 0; k < g; ++k) x = multiply(datum, x, handle);
  return x[datum.unit()];
}

Integer markings_first_rank(const FusionDatum& datum, int g, std::span<const Label> labels) {
  const std::size_t n = labels.size();
  if (n >= 4 || (n == 3 && g > 0)) {
    Integer total = 0;
    for (Label v = 0; v < datum.size(); ++v) {
      int k = datum.n3(labels[n - 2], labels[n - 1], v);
      if (!k) continue;
      std::vector<Label> rest(labels.begin(), labels.end() - 2);
      rest.push_back(datum.dual(v));
      total += k * markings_first_rank(datum, g, rest);
    }
    return total;
  }
  if (g > 0) {
    Integer total = 0;
    for (Label v = 0; v < datum.size(); ++v) {
      std::vector<Label> more(labels.begin(), labels.end());
      more.push_back(v);
      more.push_back(datum.dual(v));
      total += markings_first_rank(datum, g - 1, more);
    }
    return total;
  }
  switch (n) {
    case 0:
      return 1;
    case 1:
      return labels[0] == datum.unit() ? 1 : 0;
    case 2:
      return labels[1] == datum.dual(labels[0]) ? 1 : 0;
    default:
      return datum.n3(labels[0], labels[1], labels[2]);
  }
}

namespace {

using EdgeMultiset = std::vector<std::pair<int, int>>;

EdgeMultiset edge_multiset(const StableGraph& g, const std::vector<int>& perm) {
  EdgeMultiset out;
  for (const auto& e : g.edges) {
    int a = perm[e[0]], b = perm[e[1]];
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool connected(int V, const EdgeMultiset& edges) {
  std::vector<int> comp(V);
  std::iota(comp.begin(), comp.end(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [a, b] : edges) {
      int m = std::min(comp[a], comp[b]);
      if (comp[a] != m || comp[b] != m) {
        comp[a] = comp[b] = m;
        changed = true;
      }
    }
  }
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

// Calls f on every multiset of `count` unordered vertex pairs.
template <class F>
void for_each_edge_multiset(int V, int count, F&& f) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < V; ++a)
    for (int b = a; b < V; ++b) pairs.emplace_back(a, b);
  EdgeMultiset cur;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (static_cast<int>(cur.size()) == count) {
      f(cur);
      return;
    }
    for (std::size_t i = from; i < pairs.size(); ++i) {
      cur.push_back(pairs[i]);
      self(self, i);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

bool brute_isomorphic(const StableGraph& a, const StableGraph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() ||
      a.num_legs() != b.num_legs())
    return false;
  std::vector<int> identity(b.num_vertices());
  std::iota(identity.begin(), identity.end(), 0);
  const EdgeMultiset target = edge_multiset(b, identity);
  std::vector<int> perm = identity;
  do {
    bool ok = true;
    for (int v = 0; v < a.num_vertices() && ok; ++v) ok = a.genus[v] == b.genus[perm[v]];
    for (int i = 0; i < a.num_legs() && ok; ++i) ok = perm[a.leg_vertex[i]] == b.leg_vertex[i];
    if (ok && edge_multiset(a, perm) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::size_t brute_automorphisms(const StableGraph& g) {
  const int H = 2 * g.num_edges();
  if (H == 0) return 1;
  // Half-edge h = 2e + s lives on vertex edges[e][s]; its partner is h ^ 1.
  std::vector<int> perm(H);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t count = 0;
  do {
    bool ok = true;
    for (int h = 0; h < H && ok; ++h) ok = (perm[h ^ 1] == (perm[h] ^ 1));
    if (!ok) continue;
    std::vector<int> vmap(g.num_vertices(), -1);
    for (int h = 0; h < H && ok; ++h) {
      int from = g.edges[h / 2][h % 2];
      int to = g.edges[perm[h] / 2][perm[h] % 2];
      if (vmap[from] == -1)
        vmap[from] = to;
      else
        ok = vmap[from] == to;
    }
    if (!ok) continue;
    std::vector<bool> hit(g.num_vertices(), false);
    for (int v = 0; v < g.num_vertices() && ok; ++v) {
      ok = vmap[v] >= 0 && !hit[vmap[v]] && g.genus[vmap[v]] == g.genus[v];
      if (ok) hit[vmap[v]] = true;
    }
    for (int i = 0; i < g.num_legs() && ok; ++i) ok = vmap[g.leg_vertex[i]] == g.leg_vertex[i];
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

std::vector<LabeledGraph> brute_force_stable_graphs(int g, int n, int max_edges) {
  if (2 * g - 2 + n <= 0) throw InvalidInput("unstable (g,n)");
  std::vector<LabeledGraph> reps;
  for (int E = 0; E <= max_edges; ++E) {
    for (int V = 1; V <= E + 1; ++V) {
      const int vertex_genus = g - (E - V + 1);
      if (vertex_genus < 0) continue;
      // genus distributions
      std::vector<std::vector<int>> genera;
      std::vector<int> cur(V, 0);
      auto gen = [&](auto&& self, int v, int left) -> void {
        if (v == V - 1) {
          cur[v] = left;
          genera.push_back(cur);
          return;
        }
        for (int k = 0; k <= left; ++k) {
          cur[v] = k;
          self(self, v + 1, left - k);
        }
      };
      gen(gen, 0, vertex_genus);

      for_each_edge_multiset(V, E, [&](const EdgeMultiset& edges) {
        if (!connected(V, edges)) return;
        for (const auto& genus : genera) {
          std::vector<int> legs(n, 0);
          while (true) {
            StableGraph graph{genus, legs, {}};
            for (auto [a, b] : edges) graph.edges.push_back({a, b});
            bool stable = true;
            for (int v = 0; v < V && stable; ++v)
              stable = 2 * graph.genus[v] - 2 + graph.valence(v) > 0;
            if (stable &&
                std::none_of(reps.begin(), reps.end(), [&](const LabeledGraph& r) {
                  return brute_isomorphic(r.graph, graph);
                }))
              reps.push_back({graph, brute_automorphisms(graph)});
            int i = 0;
            while (i < n && ++legs[i] == V) legs[i++] = 0;
            if (i == n) break;
          }
        }
      });
    }
  }
  return reps;
}

Rational two_loop_hand_coefficient(const StableGraph& two_loop) {
  // Box count at each vertex: legs plus the two half-edges.
  for (int v = 0; v < two_loop.num_vertices(); ++v)
    if (two_loop.valence(v) % 2 != 0) return 0;
  const int exponent = two_loop.arithmetic_genus() - two_loop.h1();
  Integer ranks = 1;
  ranks <<= exponent;
  return Rational(ranks) * ratio(1, 16) / Rational(static_cast<unsigned long>(brute_automorphisms(two_loop)));
}

}  // namespace verlinde::oracle
