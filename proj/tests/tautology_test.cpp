#include "verlinde/cohft.hpp"
#include "verlinde/error.hpp"
#include "verlinde/tautology.hpp"
#include "verlinde/verify/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace verlinde;

namespace {

DecoratedGraph plain(StableGraph g) { return DecoratedGraph::undecorated(std::move(g)); }

DecoratedGraph self_loop_1_1() { return plain(StableGraph{{0}, {0}, {{0, 0}}}); }

using DivisorPower = std::pair<DivisorSymbol, int>;

// Splits of every edge of a tree, as sets of (genus, marking mask) sides.
std::set<std::set<std::pair<int, unsigned>>> tree_splits(const StableGraph& t) {
  std::set<std::set<std::pair<int, unsigned>>> out;
  for (int e = 0; e < t.num_edges(); ++e) {
    std::vector<int> side(t.num_vertices(), -1);
    side[t.edges[e][0]] = 0;
    side[t.edges[e][1]] = 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (int f = 0; f < t.num_edges(); ++f) {
        if (f == e) continue;
        auto [a, b] = t.edges[f];
        if (side[a] >= 0 && side[b] < 0) side[b] = side[a], changed = true;
        if (side[b] >= 0 && side[a] < 0) side[a] = side[b], changed = true;
      }
    }
    std::pair<int, unsigned> s[2] = {{0, 0}, {0, 0}};
    for (int v = 0; v < t.num_vertices(); ++v) s[side[v]].first += t.genus[v];
    for (int i = 0; i < t.num_legs(); ++i) s[side[t.leg_vertex[i]]].second |= 1u << i;
    out.insert({s[0], s[1]});
  }
  return out;
}

std::set<std::pair<int, unsigned>> split_of(const DivisorSymbol& d) {
  auto [a, b] = d.sides();
  return {{a.genus, static_cast<unsigned>(a.markings)}, {b.genus, static_cast<unsigned>(b.markings)}};
}

}  // namespace

TEST_CASE("class arithmetic") {
  TautClass a(1, 1, 2);
  a.add_term(0, plain(trivial_graph(1, 1)), 2);
  a.add_term(1, plain(trivial_graph(1, 1)), -1);
  a.add_term(0, self_loop_1_1(), ratio(-1, 8));
  CHECK(add(a, TautClass(1, 1, 2)) == a);
  CHECK(add(a, scale(a, -1)).empty());
  CHECK_THROWS_AS(add(a, TautClass(1, 2, 2)), InvalidInput);
  CHECK(add(a, TautClass(1, 1, 1)).truncation() == 1);

  // Isomorphic decorations merge.
  TautClass b(1, 2, 3);
  DecoratedGraph x = plain(StableGraph{{0, 1}, {0, 0}, {{0, 1}}});
  x.hpsi = {{1, 0}};
  DecoratedGraph y = plain(StableGraph{{1, 0}, {1, 1}, {{1, 0}}});
  y.hpsi = {{1, 0}};
  b.add_term(0, x, ratio(1, 3));
  b.add_term(0, y, ratio(1, 6));
  CHECK(b.size() == 1);
  CHECK(b.coefficient_of(0, x) == ratio(1, 2));
  CHECK(b.coefficient_of(0, y) == ratio(1, 2));
  CHECK(TautClass(1, 2, 3).coefficient_of(0, x) == 0);

  // Terms beyond the truncation are dropped.
  TautClass c(1, 1, 0);
  c.add_term(1, plain(trivial_graph(1, 1)), 1);
  CHECK(c.empty());
  CHECK_THROWS_AS(TautClass(0, 2, 1), InvalidInput);
}

TEST_CASE("locus restriction") {
  TautClass a(1, 1, 1);
  a.add_term(0, plain(trivial_graph(1, 1)), 2);
  a.add_term(0, self_loop_1_1(), ratio(-1, 8));
  CHECK(restrict(a, Locus::smooth).size() == 1);
  CHECK(restrict(a, Locus::compact_type).coefficient_of(0, self_loop_1_1()) == 0);
  CHECK(restrict(a, Locus::general) == a);

  const std::vector<Label> labels{1, 1};
  const TautClass ch = verlinde_chern_character(builtin_sl2(1), 2, 2, labels, 2);
  const TautClass rt = restrict(ch, Locus::rational_tails);
  CHECK(!rt.empty());
  std::size_t expected = 0;
  for (const auto& [key, term] : ch.terms()) {
    const StableGraph& g = term.graph.graph;
    const bool keep = g.is_tree() && std::count(g.genus.begin(), g.genus.end(), 2) == 1;
    if (keep) ++expected;
  }
  CHECK(rt.size() == expected);
  for (const auto& [key, term] : rt.terms()) {
    CHECK(term.graph.graph.is_tree());
    CHECK(std::count(term.graph.graph.genus.begin(), term.graph.graph.genus.end(), 2) == 1);
  }
}

TEST_CASE("exponential multipliers") {
  const TautClass one = TautClass::unit(1, 2, 2);
  const TautClass e = multiply_lambda_exponential(one, 3);
  CHECK(e.coefficient_of(1, plain(trivial_graph(1, 2))) == 3);
  CHECK(e.coefficient_of(2, plain(trivial_graph(1, 2))) == ratio(9, 2));
  const std::vector<Rational> b{ratio(1, 2), 0};
  const TautClass p = multiply_psi_exponential(one, b);
  DecoratedGraph psi1sq = plain(trivial_graph(1, 2));
  psi1sq.lpsi = {2, 0};
  CHECK(p.coefficient_of(0, psi1sq) == ratio(1, 8));
  CHECK(zero_lambda(e) == one);

  // relabel_markings moves legs and leg decorations together
  const std::vector<int> swap{2, 1};
  DecoratedGraph psi2sq = plain(trivial_graph(1, 2));
  psi2sq.lpsi = {0, 2};
  CHECK(relabel_markings(p, swap).coefficient_of(0, psi2sq) == ratio(1, 8));
}

TEST_CASE("divisor monomials") {
  const DivisorSymbol d = DivisorSymbol::separating(1, 2, 0, {1, 2});
  const DivisorPower once[] = {{d, 1}};
  const TautClass t1 = divisor_monomial_expand(1, 2, once, {});
  REQUIRE(t1.size() == 1);
  CHECK(t1.coefficient_of(0, plain(d.graph())) == 1);

  const DivisorPower twice[] = {{d, 2}};
  const TautClass t2 = divisor_monomial_expand(1, 2, twice, {});
  CHECK(t2.size() == 2);
  DecoratedGraph a = plain(d.graph()), b = plain(d.graph());
  a.hpsi = {{1, 0}};
  b.hpsi = {{0, 1}};
  CHECK(t2.coefficient_of(0, a) == -1);
  CHECK(t2.coefficient_of(0, b) == -1);

  // Two compatible divisors on Mbar_{0,5}: the two-edge tree.
  const DivisorSymbol d12 = DivisorSymbol::separating(0, 5, 0, {1, 2});
  const DivisorSymbol d45 = DivisorSymbol::separating(0, 5, 0, {4, 5});
  const DivisorPower pair[] = {{d12, 1}, {d45, 1}};
  const TautClass t3 = divisor_monomial_expand(0, 5, pair, {});
  REQUIRE(t3.size() == 1);
  const auto& term = t3.terms().begin()->second;
  CHECK(term.coeff == 1);
  CHECK(term.graph.graph.num_edges() == 2);
  CHECK(term.graph.graph.is_tree());

  // Incompatible: {1,2} | {3,4,5} and {1,3} | {2,4,5}.
  const DivisorSymbol d13 = DivisorSymbol::separating(0, 5, 0, {1, 3});
  const DivisorPower crossing[] = {{d12, 1}, {d13, 1}};
  CHECK(divisor_monomial_expand(0, 5, crossing, {}).empty());
  const auto want = std::set{split_of(d12), split_of(d13)};
  for (const auto& r : oracle::brute_force_stable_graphs(0, 5, 2)) {
    if (r.graph.num_edges() != 2) continue;
    CHECK(tree_splits(r.graph) != want);
  }
}

TEST_CASE("divisor products with several realizing trees") {
  // g=2, n=3: an unmarked genus-1 tail can hang on either end of the
  // {1,2} | {3} edge with genus 1 on both sides.
  const DivisorSymbol tail = DivisorSymbol::separating(2, 3, 1, {});
  const DivisorSymbol middle = DivisorSymbol::separating(2, 3, 1, {3});
  const DivisorPower factors[] = {{tail, 1}, {middle, 1}};
  CHECK_THROWS_AS(divisor_monomial_expand(2, 3, factors, {}), UnsupportedOperation);
  const TautClass t =
      divisor_monomial_expand(2, 3, factors, {}, CorrectionPolicy::assume_rational_tails);

  const auto want = std::set{split_of(tail), split_of(middle)};
  TautClass expected(2, 3, 2);
  for (const auto& r : oracle::brute_force_stable_graphs(2, 3, 2))
    if (r.graph.num_edges() == 2 && r.graph.is_tree() && tree_splits(r.graph) == want)
      expected.add_term(0, plain(r.graph), ratio(1ul, static_cast<unsigned long>(r.automorphisms)));
  CHECK(expected.size() == 2);
  CHECK(t == expected);
}

TEST_CASE("divisor preconditions") {
  const DivisorSymbol loop(StableGraph{{1}, {0}, {{0, 0}}});
  CHECK_FALSE(loop.is_separating());
  const DivisorPower bad[] = {{loop, 1}};
  CHECK_THROWS_AS(divisor_monomial_expand(2, 1, bad, {}), InvalidInput);

  const DivisorSymbol halves = DivisorSymbol::separating(2, 0, 1, {});
  CHECK_FALSE(satisfies_no_correction(halves, 2));
  const DivisorPower sq[] = {{halves, 2}};
  CHECK_THROWS_AS(divisor_monomial_expand(2, 0, sq, {}), UnsupportedOperation);
  // (1/2)(-psi' - psi''): the vertex swap merges both halves into one term.
  const TautClass t = divisor_monomial_expand(2, 0, sq, {}, CorrectionPolicy::assume_rational_tails);
  DecoratedGraph psi = plain(halves.graph());
  psi.hpsi = {{1, 0}};
  CHECK(t.size() == 1);
  CHECK(t.coefficient_of(0, psi) == -1);

  CHECK(satisfies_no_correction(DivisorSymbol::separating(2, 2, 0, {1, 2}), 2));
  CHECK(satisfies_no_correction(DivisorSymbol::separating(3, 0, 1, {}), 3) == false);
  CHECK_THROWS_AS(DivisorSymbol(trivial_graph(1, 1)), InvalidInput);
}

TEST_CASE("exponentials of divisor combinations") {
  const std::vector<Rational> zero_psi(2, 0);
  const DivisorSymbol d = DivisorSymbol::separating(1, 2, 0, {1, 2});
  const std::vector<std::pair<DivisorSymbol, Rational>> none{{d, 0}};
  CHECK(exp_of_divisor_combination(1, 2, 0, zero_psi, none, 2) == TautClass::unit(1, 2, 2));

  const TautClass lam = exp_of_divisor_combination(1, 2, 5, zero_psi, {}, 2);
  CHECK(lam.size() == 3);
  CHECK(lam.coefficient_of(2, plain(trivial_graph(1, 2))) == ratio(25, 2));

  const Rational w = ratio(1, 3);
  const std::vector<std::pair<DivisorSymbol, Rational>> one{{d, -w}};
  const TautClass ex = exp_of_divisor_combination(1, 2, 0, zero_psi, one, 2);
  TautClass expected = TautClass::unit(1, 2, 2);
  const DivisorPower once[] = {{d, 1}}, twice[] = {{d, 2}};
  expected.accumulate(divisor_monomial_expand(1, 2, once, {}), -w);
  expected.accumulate(divisor_monomial_expand(1, 2, twice, {}), w * w / 2);
  CHECK(ex == expected);
  CHECK(ex.size() == 4);
}
