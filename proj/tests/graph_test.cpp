#include "verlinde/error.hpp"
#include "verlinde/graph.hpp"
#include "verlinde/verify/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

using namespace verlinde;

namespace {

StableGraph two_vertex(int g0, int g1, std::vector<int> legs, int edges) {
  StableGraph g{{g0, g1}, std::move(legs), {}};
  for (int e = 0; e < edges; ++e) g.edges.push_back({0, 1});
  return g;
}

}  // namespace

TEST_CASE("hand-enumerated counts") {
  CHECK(enumerate_stable_graphs(0, 3, 5).size() == 1);
  CHECK(enumerate_stable_graphs(0, 4, 1).size() == 4);
  CHECK(enumerate_stable_graphs(2, 0, 1).size() == 3);
  CHECK(enumerate_stable_graphs(0, 3, 2).size() == 1);
  const auto g11 = enumerate_stable_graphs(1, 1, 1);
  REQUIRE(g11.size() == 2);
  CHECK(automorphism_order(g11[0]) == 1);
  CHECK(automorphism_order(g11[1]) == 2);
  // M_{0,5}: 1 + 10 + 15 strata
  CHECK(enumerate_stable_graphs(0, 5, 2).size() == 26);
  CHECK_THROWS_AS(enumerate_stable_graphs(1, 0, 1), InvalidInput);
  CHECK_THROWS_AS(enumerate_stable_graphs(0, 2, 1), InvalidInput);
}

TEST_CASE("enumeration output is sorted, canonical and unique") {
  const auto graphs = enumerate_stable_graphs(2, 2, 3);
  std::vector<GraphKey> keys;
  for (const auto& g : graphs) {
    CHECK(canonical_form(g) == g);
    CHECK(g.arithmetic_genus() == 2);
    CHECK_NOTHROW(g.validate());
    keys.push_back(canonical_key(g));
  }
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
}

TEST_CASE("enumeration matches brute force") {
  for (auto [g, n, e] : std::vector<std::array<int, 3>>{{0, 5, 2}, {1, 2, 3}, {2, 1, 3}, {3, 0, 2}}) {
    const auto fast = enumerate_stable_graphs(g, n, e);
    const auto brute = oracle::brute_force_stable_graphs(g, n, e);
    CHECK(fast.size() == brute.size());
    std::multiset<std::size_t> a, b;
    for (const auto& gr : fast) a.insert(automorphism_order(gr));
    for (const auto& r : brute) b.insert(r.automorphisms);
    CHECK(a == b);
  }
}

TEST_CASE("automorphism orders") {
  CHECK(automorphism_order(trivial_graph(3, 2)) == 1);
  CHECK(automorphism_order(StableGraph{{0}, {0}, {{0, 0}}}) == 2);
  CHECK(automorphism_order(two_vertex(1, 1, {}, 1)) == 2);
  CHECK(automorphism_order(two_vertex(1, 1, {}, 2)) == 4);
  // Banana with three edges between genus-0 vertices: 3! * 2
  CHECK(automorphism_order(two_vertex(0, 0, {}, 3)) == 12);
  // Two self-loops on one genus-0 vertex with one leg: 2! * 2^2
  CHECK(automorphism_order(StableGraph{{0}, {0}, {{0, 0}, {0, 0}}}) == 8);
  for (const auto& g : enumerate_stable_graphs(2, 1, 3)) {
    CHECK(automorphism_order(g) == oracle::brute_automorphisms(g));
    CHECK(automorphisms(g).size() == automorphism_order(g));
  }
}

TEST_CASE("automorphisms of a non-canonical labeling") {
  // Legs 2,4 on vertex 0 and 1,3,5 on vertex 1: the cell order is reversed.
  StableGraph g{{0, 0}, {1, 0, 1, 0, 1}, {{0, 1}}};
  CHECK(automorphisms(g).size() == 1);
  StableGraph loops{{1, 0}, {1}, {{1, 1}, {0, 1}}};
  CHECK(automorphisms(loops).size() == oracle::brute_automorphisms(loops));
}

TEST_CASE("canonical form of decorated graphs") {
  // Two-loop with swapped edge order.
  DecoratedGraph d = DecoratedGraph::undecorated(two_vertex(1, 1, {0, 0}, 2));
  d.hpsi = {{1, 0}, {0, 2}};
  DecoratedGraph swapped = d;
  std::swap(swapped.hpsi[0], swapped.hpsi[1]);
  CHECK(canonical_form(d) == canonical_form(swapped));

  const DecoratedGraph trivial = DecoratedGraph::undecorated(trivial_graph(2, 1));
  CHECK(canonical_form(trivial) == trivial);

  // Decorations break symmetry.
  DecoratedGraph loop = DecoratedGraph::undecorated(StableGraph{{0}, {0}, {{0, 0}}});
  CHECK(automorphism_order(loop) == 2);
  loop.hpsi = {{1, 0}};
  CHECK(automorphism_order(loop) == 1);
  DecoratedGraph flipped = loop;
  flipped.hpsi = {{0, 1}};
  CHECK(canonical_form(loop) == canonical_form(flipped));
}

TEST_CASE("random relabelings canonicalize identically") {
  std::mt19937 rng(7);
  for (const auto& g : enumerate_stable_graphs(1, 3, 3)) {
    std::vector<int> perm(g.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    StableGraph h{std::vector<int>(g.num_vertices()), g.leg_vertex, {}};
    for (int v = 0; v < g.num_vertices(); ++v) h.genus[perm[v]] = g.genus[v];
    for (auto& lv : h.leg_vertex) lv = perm[lv];
    for (auto e : g.edges) h.edges.push_back({perm[e[1]], perm[e[0]]});
    std::reverse(h.edges.begin(), h.edges.end());
    CHECK(canonical_form(h) == g);
    CHECK(oracle::brute_isomorphic(g, h));
  }
}

TEST_CASE("locus classification") {
  CHECK(classify_locus(trivial_graph(2, 1), 2) == Locus::smooth);
  CHECK(classify_locus(StableGraph{{0}, {0}, {{0, 0}}}, 1) == Locus::general);
  CHECK(classify_locus(two_vertex(2, 0, {1, 1}, 1), 2) == Locus::rational_tails);
  CHECK(classify_locus(two_vertex(1, 1, {}, 1), 2) == Locus::compact_type);
  CHECK(lies_in(trivial_graph(1, 1), 1, Locus::compact_type));
  CHECK_FALSE(lies_in(two_vertex(1, 1, {}, 1), 2, Locus::rational_tails));
  CHECK(parse_locus("full") == Locus::general);
  CHECK_THROWS_AS(parse_locus("everywhere"), InvalidInput);
}

TEST_CASE("two-loop graphs") {
  const auto loops = two_loop_graphs(3, 2);
  CHECK(loops.size() == 5);
  std::map<bool, int> parity;
  for (const auto& l : loops) {
    ++parity[l.even];
    CHECK(l.graph.num_edges() == 2);
    CHECK(l.graph.h1() == 1);
  }
  CHECK(parity[true] == 2);
  CHECK(parity[false] == 3);
  // Both legs on one genus-1 vertex, other vertex genus 1: even.
  const StableGraph even = canonical_form(two_vertex(1, 1, {0, 0}, 2));
  const StableGraph odd = canonical_form(two_vertex(1, 1, {0, 1}, 2));
  for (const auto& l : loops) {
    if (l.graph == even) CHECK(l.even);
    if (l.graph == odd) CHECK_FALSE(l.even);
  }
  CHECK(two_loop_graphs(1, 0).empty());
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS((StableGraph{{0}, {0, 0}, {}}).validate(), InvalidInput);  // unstable vertex
  CHECK_THROWS_AS((StableGraph{{1, 1}, {}, {}}).validate(), InvalidInput);   // disconnected
  CHECK_THROWS_AS((StableGraph{{1}, {3}, {}}).validate(), InvalidInput);     // leg out of range
  CHECK(describe(two_vertex(0, 2, {0, 0}, 2)) == "[g0{1,2} g2{} | 0-1 0-1]");
}
