#include "verlinde/cohft.hpp"
#include "verlinde/error.hpp"
#include "verlinde/json_io.hpp"
#include "verlinde/verify/oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace verlinde;

namespace {

DecoratedGraph plain(StableGraph g) { return DecoratedGraph::undecorated(std::move(g)); }

DecoratedGraph with_legs(StableGraph g, std::vector<int> lpsi) {
  DecoratedGraph d = plain(std::move(g));
  d.lpsi = std::move(lpsi);
  return d;
}

// sl_2 level 1 character straight from the specialized graph sum:
//   exp(-lambda/2) sum_Gamma 2^{g - h1} / |Aut Gamma| [box-even Gamma]
//     prod_e (1 - e^{(psi' + psi'')/4}) / (psi' + psi'') prod_i e^{w_i psi_i}
// over brute-force graphs, expanded monomial by monomial.
TautClass sl2_level1_oracle(int g, int n, const std::vector<Label>& labels, int D) {
  TautClass out(g, n, D);
  const Rational quarter = ratio(1, 4);
  for (const auto& [graph, aut] : oracle::brute_force_stable_graphs(g, n, D)) {
    const int V = graph.num_vertices(), E = graph.num_edges();
    std::vector<int> boxes(V, 0);
    for (int i = 0; i < n; ++i) boxes[graph.leg_vertex[i]] += labels[i];
    for (const auto& e : graph.edges) ++boxes[e[0]], ++boxes[e[1]];
    if (std::any_of(boxes.begin(), boxes.end(), [](int b) { return b % 2; })) continue;
    Integer ranks = 1;
    ranks <<= g - graph.h1();
    const Rational base = Rational(ranks) / Rational(static_cast<unsigned long>(aut));

    DecoratedGraph d = plain(graph);
    const int budget = D - E;
    // edges: coefficient of psi'^a psi''^b is -(1/4)^{a+b+1}/(a+b+1)! * C(a+b, a)
    auto legs = [&](auto&& self, int i, int left, const Rational& c) -> void {
      if (i == n) {
        for (int j = 0; j <= left; ++j)
          out.add_term(j, d, c * power(ratio(-1, 2), j) / Rational(factorial(j)));
        return;
      }
      const Rational w = labels[i] ? quarter : Rational(0);
      for (int a = 0; a <= left; ++a) {
        d.lpsi[i] = a;
        self(self, i + 1, left - a, c * power(w, a) / Rational(factorial(a)));
      }
      d.lpsi[i] = 0;
    };
    auto edges = [&](auto&& self, int e, int left, const Rational& c) -> void {
      if (e == E) {
        legs(legs, 0, left, c);
        return;
      }
      for (int k = 0; k <= left; ++k)
        for (int a = 0; a <= k; ++a) {
          d.hpsi[e] = {a, k - a};
          self(self, e + 1, left - k,
               -c * power(quarter, k + 1) / Rational(factorial(k + 1)) * Rational(binomial(k, a)));
        }
      d.hpsi[e] = {0, 0};
    };
    edges(edges, 0, budget, base);
  }
  return out;
}

}  // namespace

TEST_CASE("edge factor and W series") {
  const auto c = edge_factor_series(ratio(1, 4), 2);
  CHECK(c == std::vector<Rational>{ratio(-1, 4), ratio(-1, 32), ratio(-1, 384)});
  const FusionDatum sl2 = builtin_sl2(1);
  const DiagonalRMatrix W = verlinde_w_matrix(sl2, 2);
  CHECK(W.entries[0] == std::vector<Rational>{1, 0, 0});
  CHECK(W.entries[1] == std::vector<Rational>{1, ratio(1, 4), ratio(1, 32)});
  CHECK(W.degree() == 2);
  const DiagonalRMatrix W3 = verlinde_w_matrix(builtin_slr_level1(3), 4);
  CHECK(W3.entries[0] == std::vector<Rational>{1, 0, 0, 0, 0});
}

TEST_CASE("symplectic condition") {
  const FusionDatum sl2 = builtin_sl2(1);
  CHECK(symplectic_check(sl2, verlinde_w_matrix(sl2, 8), 8));
  CHECK(symplectic_check(sl2, identity_r_matrix(sl2, 8), 8));
  DiagonalRMatrix bad = identity_r_matrix(sl2, 2);
  bad.entries[1][1] = 1;  // 1 + z on the self-dual box: (1+z)(1-z) = 1 - z^2
  CHECK_FALSE(symplectic_check(sl2, bad, 2));
  CHECK(symplectic_check(sl2, bad, 1));
  const FusionDatum r4 = builtin_slr_level1(4);
  CHECK(symplectic_check(r4, verlinde_w_matrix(r4, 8), 8));
}

TEST_CASE("identity R returns the rank TQFT") {
  const FusionDatum d = builtin_sl2(2);
  const std::vector<Label> labels{1, 1, 2};
  const TautClass t = rmatrix_action(d, identity_r_matrix(d, 2), 1, 3, labels, 2);
  TautClass expected(1, 3, 2);
  expected.add_term(0, plain(trivial_graph(1, 3)), Rational(rank(d, 1, labels)));
  CHECK(t == expected);
}

TEST_CASE("degree-0 part is the rank") {
  const FusionDatum d = builtin_slr_level1(3);
  const std::vector<Label> labels{1, 2};
  const TautClass t = verlinde_chern_character(d, 1, 2, labels, 0);
  REQUIRE(t.size() == 1);
  CHECK(t.coefficient_of(0, plain(trivial_graph(1, 2))) == 3);
}

TEST_CASE("hand expansions") {
  const FusionDatum sl2 = builtin_sl2(1);

  // (0,4), all boxes, D = 1: boundary terms need the unit on the edge.
  const std::vector<Label> boxes(4, 1);
  const TautClass r = rmatrix_action(sl2, verlinde_w_matrix(sl2, 1), 0, 4, boxes, 1);
  CHECK(r.size() == 5);
  CHECK(r.coefficient_of(0, plain(trivial_graph(0, 4))) == 1);
  for (int i = 0; i < 4; ++i) {
    std::vector<int> lpsi(4, 0);
    lpsi[i] = 1;
    CHECK(r.coefficient_of(0, with_legs(trivial_graph(0, 4), lpsi)) == ratio(1, 4));
  }

  // (1,1), empty label, D = 1: 2 - lambda - 1/8 [self-loop].
  const std::vector<Label> empty{0};
  const TautClass ch = verlinde_chern_character(sl2, 1, 1, empty, 1);
  CHECK(ch.size() == 3);
  CHECK(ch.coefficient_of(0, plain(trivial_graph(1, 1))) == 2);
  CHECK(ch.coefficient_of(1, plain(trivial_graph(1, 1))) == -1);
  CHECK(ch.coefficient_of(0, plain(StableGraph{{0}, {0}, {{0, 0}}})) == ratio(-1, 8));

  // Odd box count: zero class.
  const std::vector<Label> odd{1, 0, 0};
  CHECK(verlinde_chern_character(sl2, 1, 3, odd, 2).empty());
}

TEST_CASE("engine agrees with the specialized sl2 level 1 graph sum") {
  const FusionDatum sl2 = builtin_sl2(1);
  struct Case {
    int g, n, D;
    std::vector<Label> labels;
  };
  const std::vector<Case> cases{{1, 1, 3, {0}}, {1, 2, 3, {1, 1}}, {2, 1, 3, {0}},
                                {0, 5, 2, {1, 1, 0, 1, 1}}, {2, 2, 2, {1, 1}}, {3, 0, 2, {}},
                                {1, 3, 3, {1, 0, 1}}};
  for (const auto& c : cases) {
    CAPTURE(c.g);
    CAPTURE(c.n);
    CHECK(verlinde_chern_character(sl2, c.g, c.n, c.labels, c.D) ==
          sl2_level1_oracle(c.g, c.n, c.labels, c.D));
  }
}

TEST_CASE("smooth-locus slope") {
  const std::vector<Label> empty{0};
  CHECK(slope_restriction_check(builtin_sl2(1), 1, 1, empty, 1));
  const FusionDatum sl2 = builtin_sl2(1);
  const std::vector<Label> boxes(4, 1);
  const TautClass smooth = restrict(verlinde_chern_character(sl2, 0, 4, boxes, 1), Locus::smooth);
  CHECK(smooth.coefficient_of(1, plain(trivial_graph(0, 4))) == ratio(-1, 2));
  CHECK(smooth.coefficient_of(0, with_legs(trivial_graph(0, 4), {0, 0, 1, 0})) == ratio(1, 4));
  const std::vector<Label> odd{1};
  CHECK_THROWS_AS(slope_restriction_check(sl2, 1, 1, odd, 1), InvalidInput);
}

TEST_CASE("sl_r tree remainders") {
  StableGraph ab{{0, 0}, {0, 0, 1, 1}, {{0, 1}}};
  const std::vector<Label> l{1, 1, 2, 2};
  const auto a = slr_tree_remainders(3, ab, l);
  CHECK(a.side0 == std::vector<Label>{1});
  CHECK(a.weight == std::vector<Rational>{ratio(1, 3)});

  const std::vector<Label> units(4, 0);
  const auto z = slr_tree_remainders(3, ab, units);
  CHECK(z.weight == std::vector<Rational>{0});

  StableGraph path{{0, 0, 0}, {0, 0, 1, 2, 2}, {{0, 1}, {1, 2}}};
  const std::vector<Label> boxes{1, 0, 0, 1, 0};
  const auto p = slr_tree_remainders(2, path, boxes);
  CHECK(p.side0 == std::vector<Label>{1, 1});
  CHECK(p.weight == std::vector<Rational>{ratio(1, 4), ratio(1, 4)});

  const std::vector<Label> bad{1, 1, 1, 2};
  CHECK_THROWS_AS(slr_tree_remainders(3, ab, bad), InvalidInput);
  CHECK_THROWS_AS(slr_tree_remainders(2, StableGraph{{0}, {0}, {{0, 0}}}, std::vector<Label>{0}),
                  InvalidInput);
}

TEST_CASE("compact-type closed form") {
  const TautClass n0 = compact_type_closed_form(3, 2, 0, {}, 2);
  CHECK(n0.size() == 3);
  CHECK(n0.coefficient_of(0, plain(trivial_graph(2, 0))) == 9);
  CHECK(n0.coefficient_of(1, plain(trivial_graph(2, 0))) == -9);
  CHECK(n0.coefficient_of(2, plain(trivial_graph(2, 0))) == ratio(9, 2));

  // r = 2, (1,2), two boxes: the only separating divisor has weight 0.
  const std::vector<Label> boxes{1, 1};
  const TautClass cf = compact_type_closed_form(2, 1, 2, boxes, 2);
  CHECK(cf.coefficient_of(0, with_legs(trivial_graph(1, 2), {1, 1})) == ratio(1, 8));
  CHECK(cf.coefficient_of(0, with_legs(trivial_graph(1, 2), {2, 0})) == ratio(1, 16));
  CHECK(cf.coefficient_of(1, with_legs(trivial_graph(1, 2), {1, 0})) == ratio(-1, 4));
  CHECK(cf.coefficient_of(2, plain(trivial_graph(1, 2))) == ratio(1, 4));
  const TautClass sum =
      restrict(verlinde_chern_character(builtin_slr_level1(2), 1, 2, boxes, 2), Locus::compact_type);
  CHECK(cf == sum);

  // r = 3 with nonzero divisor weights.
  const std::vector<Label> l{1, 1, 1};
  CHECK(compact_type_closed_form(3, 1, 3, l, 3) ==
        restrict(verlinde_chern_character(builtin_slr_level1(3), 1, 3, l, 3), Locus::compact_type));
  CHECK_THROWS_AS(compact_type_closed_form(3, 1, 2, std::vector<Label>{1, 1}, 2), InvalidInput);
}

TEST_CASE("two-loop report") {
  const auto rows = two_loop_report(3, 2);
  REQUIRE(rows.size() == 5);
  for (const auto& row : rows) {
    if (row.loop.even) {
      CHECK(row.raw == ratio(1, 8));
      CHECK(row.normalized == ratio(1, 16));
      CHECK(row.automorphisms == 2);
      CHECK(row.vertex_rank == 4);
    } else {
      CHECK(row.raw == 0);
    }
    CHECK(row.raw == oracle::two_loop_hand_coefficient(row.loop.graph));
  }
  CHECK_THROWS_AS(two_loop_report(3, 1), InvalidInput);
  CHECK_THROWS_AS(two_loop_report(1, 2), InvalidInput);
}

TEST_CASE("evaluation options do not change the result") {
  const FusionDatum d = builtin_sl2(2);
  const std::vector<Label> labels{1, 1, 2};
  EvalOptions one, four, loose;
  one.threads = 1;
  four.threads = 4;
  loose.prune = false;
  const TautClass a = verlinde_chern_character(d, 1, 3, labels, 3, one);
  CHECK(a == verlinde_chern_character(d, 1, 3, labels, 3, four));
  CHECK(a == verlinde_chern_character(d, 1, 3, labels, 3, loose));
  CHECK(taut_to_json(a).dump() == taut_to_json(verlinde_chern_character(d, 1, 3, labels, 3, four)).dump());
}

TEST_CASE("evaluation preconditions") {
  const FusionDatum d = builtin_sl2(1);
  const std::vector<Label> one{0}, two{0, 0};
  CHECK_THROWS_AS(verlinde_chern_character(d, 0, 2, two, 1), InvalidInput);
  CHECK_THROWS_AS(verlinde_chern_character(d, 1, 1, two, 1), InvalidInput);
  CHECK_THROWS_AS(verlinde_chern_character(d, 1, 1, std::vector<Label>{3}, 1), InvalidInput);
  CHECK_THROWS_AS(rmatrix_action(d, verlinde_w_matrix(d, 1), 1, 1, one, 2), InvalidInput);
  DiagonalRMatrix bad = identity_r_matrix(d, 2);
  bad.entries[1][1] = 1;
  CHECK_THROWS_AS(rmatrix_action(d, bad, 1, 1, one, 2), InvalidInput);
}
