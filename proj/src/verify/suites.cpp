#include "verlinde/verify/suites.hpp"

#include "verlinde/error.hpp"
#include "verlinde/verify/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace verlinde::verify {

bool SuiteReport::passed() const {
  return failures() == 0 && (budget_seconds <= 0 || seconds < budget_seconds);
}

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
}

namespace {

std::string str(const Integer& x) { return x.get_str(); }

std::string labels_str(std::span<const Label> labels) {
  std::string s = "(";
  for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? "," : "") + std::to_string(labels[i]);
  return s + ")";
}

std::string type_str(int g, int n) { return "(" + std::to_string(g) + "," + std::to_string(n) + ")"; }

// Every label vector of length n over 0..L-1.
std::vector<std::vector<Label>> label_vectors(int L, int n) {
  std::vector<std::vector<Label>> out;
  std::vector<Label> cur(n, 0);
  while (true) {
    out.push_back(cur);
    int i = 0;
    while (i < n && ++cur[i] == L) cur[i++] = 0;
    if (i == n) break;
  }
  return out;
}

// Collects failures; keeps one summary row when everything passes.
class Collector {
 public:
  explicit Collector(std::string name) : name_(std::move(name)) {}

  void check(bool ok, const std::function<std::string()>& what) {
    ++count_;
    if (!ok) failures_.push_back({name_, false, what()});
  }

  void add_to(SuiteReport& report, const std::string& summary) {
    if (failures_.empty())
      report.checks.push_back({name_, true, std::to_string(count_) + " cases: " + summary});
    for (auto& f : failures_) report.checks.push_back(std::move(f));
  }

 private:
  std::string name_;
  std::size_t count_ = 0;
  std::vector<CheckResult> failures_;
};

// ---------------------------------------------------------------------------

void ranks_suite(SuiteReport& report) {
  Collector sl2("sl2-level1-ranks");
  const FusionDatum sl2_1 = builtin_sl2(1);
  const RankCalculator sl2_ranks(sl2_1);
  for (int g = 0; g <= 4; ++g)
    for (int n = 0; n <= 4; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      for (const auto& labels : label_vectors(2, n)) {
        const int boxes = static_cast<int>(std::count(labels.begin(), labels.end(), 1));
        Integer expected = 0;
        if (boxes % 2 == 0) expected = Integer(1) << g;
        Integer actual = sl2_ranks.rank(g, labels);
        sl2.check(actual == expected, [&] {
          return type_str(g, n) + " labels " + labels_str(labels) + ": expected " + str(expected) +
                 ", got " + str(actual);
        });
      }
    }
  sl2.add_to(report, "2^g for even box count, 0 otherwise");

  Collector slr("slr-level1-ranks");
  for (int r = 2; r <= 4; ++r) {
    const FusionDatum datum = builtin_slr_level1(r);
    const RankCalculator ranks(datum);
    for (int g = 0; g <= 3; ++g)
      for (int n = 0; n <= 4; ++n) {
        if (2 * g - 2 + n <= 0) continue;
        for (const auto& labels : label_vectors(r, n)) {
          const int sum = std::accumulate(labels.begin(), labels.end(), 0);
          Integer expected = 0;
          if (sum % r == 0) mpz_ui_pow_ui(expected.get_mpz_t(), r, g);
          Integer actual = ranks.rank(g, labels);
          slr.check(actual == expected, [&] {
            return "r=" + std::to_string(r) + " " + type_str(g, n) + " labels " +
                   labels_str(labels) + ": expected " + str(expected) + ", got " + str(actual);
          });
        }
      }
  }
  slr.add_to(report, "r^g iff sum = 0 mod r, r in {2,3,4}");

  // The same numbers through two other routes.
  Collector routes("decomposition-independence");
  std::vector<FusionDatum> data{builtin_sl2(1), builtin_sl2(2), builtin_sl2(3),
                                builtin_slr_level1(3)};
  for (const auto& datum : data) {
    const RankCalculator ranks(datum);
    for (int g = 0; g <= 2; ++g)
      for (int n = 0; n <= 3; ++n) {
        if (2 * g - 2 + n <= 0) continue;
        for (const auto& labels : label_vectors(datum.size(), n)) {
          Integer a = ranks.rank(g, labels);
          Integer b = oracle::fusion_ring_rank(datum, g, labels);
          Integer c = oracle::markings_first_rank(datum, g, labels);
          routes.check(a == b && a == c, [&] {
            return type_str(g, n) + " labels " + labels_str(labels) + ": recursion " + str(a) +
                   ", fusion ring " + str(b) + ", markings first " + str(c);
          });
        }
      }
  }
  routes.add_to(report, "gluing recursion = fusion ring = markings-first recursion");
}

// ---------------------------------------------------------------------------

void slope_suite(SuiteReport& report, const EvalOptions& opts) {
  const std::vector<std::pair<int, int>> types{{1, 1}, {2, 2}, {0, 4}};
  for (int level = 1; level <= 2; ++level) {
    const FusionDatum datum = builtin_sl2(level);
    const RankCalculator ranks(datum);
    Collector c("sl2-level" + std::to_string(level) + "-smooth-slope");
    for (auto [g, n] : types)
      for (const auto& labels : label_vectors(datum.size(), n)) {
        const Integer rank = ranks.rank(g, labels);
        if (rank == 0) continue;
        TautClass ch = verlinde_chern_character(ranks, g, n, labels, 3, opts);
        TautClass flat = projectively_flat_character(datum, g, n, labels, rank, 3);
        c.check(restrict(ch, Locus::smooth) == flat, [&] {
          return type_str(g, n) + " labels " + labels_str(labels) +
                 ": smooth part differs from rank * exp(-c/2 lambda + sum w psi)";
        });
      }
    c.add_to(report, "smooth restriction = projectively flat form through degree 3");
  }
}

// ---------------------------------------------------------------------------

void compact_type_suite(SuiteReport& report, const EvalOptions& opts) {
  const std::vector<std::pair<int, int>> types{{1, 2}, {2, 3}};
  for (int r = 2; r <= 3; ++r) {
    const FusionDatum datum = builtin_slr_level1(r);
    const RankCalculator ranks(datum);
    Collector c("slr" + std::to_string(r) + "-compact-type-closed-form");
    for (auto [g, n] : types)
      for (const auto& labels : label_vectors(r, n)) {
        if (std::accumulate(labels.begin(), labels.end(), 0) % r != 0) continue;
        TautClass ch = restrict(verlinde_chern_character(ranks, g, n, labels, 3, opts),
                                Locus::compact_type);
        TautClass closed = compact_type_closed_form(r, g, n, labels, 3);
        c.check(ch == closed, [&] {
          return type_str(g, n) + " labels " + labels_str(labels) + ": graph sum has " +
                 std::to_string(ch.size()) + " compact-type terms, closed form " +
                 std::to_string(closed.size()) + ", and they differ";
        });
      }
    c.add_to(report, "compact-type graph sum = closed-form exponential through degree 3");
  }
}

// ---------------------------------------------------------------------------

void twoloop_suite(SuiteReport& report, const EvalOptions& opts) {
  const auto rows = two_loop_report(3, 2, 2, opts);
  report.checks.push_back({"two-loop-count", rows.size() == 5,
                           std::to_string(rows.size()) + " two-loops (expected 5)"});
  std::vector<Rational> even_normalized;
  for (const auto& row : rows) {
    const std::string name = describe(row.loop.graph);
    if (!row.loop.even) {
      report.checks.push_back({"odd-two-loop-vanishes " + name, row.raw == 0,
                               "raw " + format_rational(row.raw)});
    } else {
      even_normalized.push_back(row.normalized);
      report.checks.push_back({"even-two-loop-normalized " + name, row.normalized == ratio(1, 16),
                               "normalized " + format_rational(row.normalized) + " (expected 1/16)"});
    }
    const Rational hand = oracle::two_loop_hand_coefficient(row.loop.graph);
    report.checks.push_back({"two-loop-hand-expansion " + name, row.raw == hand,
                             "raw " + format_rational(row.raw) + ", hand " + format_rational(hand)});
  }
  const bool equal = !even_normalized.empty() &&
                     std::all_of(even_normalized.begin(), even_normalized.end(),
                                 [&](const Rational& q) { return q == even_normalized.front(); });
  report.checks.push_back({"even-two-loops-equal", equal,
                           std::to_string(even_normalized.size()) + " even two-loops"});
}

// ---------------------------------------------------------------------------

void symplectic_suite(SuiteReport& report) {
  constexpr int degree = 8;
  std::vector<std::pair<std::string, FusionDatum>> data;
  for (int level = 1; level <= 10; ++level)
    data.emplace_back("sl2-level" + std::to_string(level), builtin_sl2(level));
  for (int r = 2; r <= 10; ++r)
    data.emplace_back("slr" + std::to_string(r) + "-level1", builtin_slr_level1(r));
  Collector builtin("builtin-w-symplectic");
  for (const auto& [name, datum] : data) {
    const DiagonalRMatrix W = verlinde_w_matrix(datum, degree);
    builtin.check(symplectic_check(datum, W, degree), [&] { return name + ": W fails"; });
  }
  builtin.add_to(report, "R(z) R*(-z) = 1 through degree 8");

  // Perturbations: a linear term on one label, and a z^8 term on one label.
  Collector perturbed("perturbed-w-rejected");
  for (const auto& [name, datum] : data) {
    for (int power : {1, degree}) {
      DiagonalRMatrix W = verlinde_w_matrix(datum, degree);
      const Label mu = datum.size() > 1 ? 1 : 0;
      W.entries[mu][power] += 1;
      perturbed.check(!symplectic_check(datum, W, degree), [&] {
        return name + ": perturbation at z^" + std::to_string(power) + " was accepted";
      });
    }
  }
  perturbed.add_to(report, "perturbed W fails the check");
}

// ---------------------------------------------------------------------------

void graphs_suite(SuiteReport& report) {
  Collector c("enumeration-vs-brute-force");
  for (int g = 0; g <= 2; ++g)
    for (int n = 0; n <= 3; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      const auto fast = enumerate_stable_graphs(g, n, 3);
      const auto brute = oracle::brute_force_stable_graphs(g, n, 3);
      std::map<int, int> fast_counts, brute_counts;
      for (const auto& gr : fast) ++fast_counts[gr.num_edges()];
      for (const auto& gr : brute) ++brute_counts[gr.graph.num_edges()];
      c.check(fast_counts == brute_counts, [&] {
        return type_str(g, n) + ": " + std::to_string(fast.size()) + " graphs enumerated, " +
               std::to_string(brute.size()) + " by brute force";
      });
      std::vector<bool> used(brute.size(), false);
      for (const auto& gr : fast) {
        std::size_t match = brute.size();
        for (std::size_t i = 0; i < brute.size() && match == brute.size(); ++i)
          if (!used[i] && oracle::brute_isomorphic(gr, brute[i].graph)) match = i;
        c.check(match < brute.size(), [&] {
          return type_str(g, n) + ": " + describe(gr) + " has no brute-force counterpart";
        });
        if (match == brute.size()) continue;
        used[match] = true;
        const std::size_t aut = automorphism_order(gr);
        c.check(aut == brute[match].automorphisms, [&] {
          return type_str(g, n) + ": |Aut " + describe(gr) + "| = " + std::to_string(aut) +
                 ", brute force " + std::to_string(brute[match].automorphisms);
        });
      }
    }
  c.add_to(report, "counts and |Aut| for g <= 2, n <= 3, <= 3 edges");

  const std::vector<std::array<int, 4>> specific{{0, 4, 1, 4}, {1, 1, 1, 2}, {2, 0, 1, 3}};
  for (auto [g, n, e, expected] : specific) {
    const auto count = enumerate_stable_graphs(g, n, e).size();
    report.checks.push_back({"count" + type_str(g, n) + " max_edges " + std::to_string(e),
                             static_cast<int>(count) == expected,
                             std::to_string(count) + " graphs (expected " +
                                 std::to_string(expected) + ")"});
  }
}

// ---------------------------------------------------------------------------

DecoratedGraph random_relabeling(const DecoratedGraph& d, std::mt19937& rng) {
  const StableGraph& g = d.graph;
  std::vector<int> vperm(g.num_vertices()), eperm(g.num_edges());
  std::iota(vperm.begin(), vperm.end(), 0);
  std::iota(eperm.begin(), eperm.end(), 0);
  std::shuffle(vperm.begin(), vperm.end(), rng);
  std::shuffle(eperm.begin(), eperm.end(), rng);
  std::bernoulli_distribution coin(0.5);
  DecoratedGraph out;
  out.graph.genus.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) out.graph.genus[vperm[v]] = g.genus[v];
  out.graph.leg_vertex.resize(g.num_legs());
  for (int i = 0; i < g.num_legs(); ++i) out.graph.leg_vertex[i] = vperm[g.leg_vertex[i]];
  out.graph.edges.resize(g.num_edges());
  out.hpsi.resize(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    const int f = coin(rng) ? 1 : 0;
    out.graph.edges[eperm[e]] = {vperm[g.edges[e][f]], vperm[g.edges[e][1 - f]]};
    out.hpsi[eperm[e]] = {d.hpsi[e][f], d.hpsi[e][1 - f]};
  }
  out.lpsi = d.lpsi;
  return out;
}

void properties_suite(SuiteReport& report, const EvalOptions& opts) {
  std::mt19937 rng(20240611u);

  // S_n equivariance.
  struct Case {
    FusionDatum datum;
    int g, n, D;
  };
  std::vector<Case> cases{{builtin_sl2(2), 0, 4, 2},
                          {builtin_sl2(2), 1, 3, 2},
                          {builtin_slr_level1(3), 1, 3, 2},
                          {builtin_sl2(1), 2, 2, 2},
                          {builtin_slr_level1(4), 0, 5, 2}};
  std::deque<RankCalculator> calculators;
  for (const auto& c : cases) calculators.emplace_back(c.datum);
  Collector equivariance("sn-equivariance");
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = trial % cases.size();
    const Case& c = cases[k];
    std::uniform_int_distribution<Label> pick(0, c.datum.size() - 1);
    std::vector<Label> labels(c.n);
    for (auto& l : labels) l = pick(rng);
    std::vector<int> perm(c.n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Label> permuted(c.n);
    for (int i = 0; i < c.n; ++i) permuted[perm[i] - 1] = labels[i];
    const TautClass lhs = verlinde_chern_character(calculators[k], c.g, c.n, permuted, c.D, opts);
    const TautClass rhs = relabel_markings(
        verlinde_chern_character(calculators[k], c.g, c.n, labels, c.D, opts), perm);
    equivariance.check(lhs == rhs, [&] {
      return type_str(c.g, c.n) + " labels " + labels_str(labels) + " permuted to " +
             labels_str(permuted) + ": characters differ";
    });
  }
  equivariance.add_to(report, "ch(sigma mu) = sigma ch(mu)");

  // Identity R gives the rank TQFT.
  Collector identity("identity-r-is-rank-tqft");
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const Case& c = cases[k];
    for (const auto& labels : label_vectors(c.datum.size(), c.n)) {
      const Integer rank = calculators[k].rank(c.g, labels);
      TautClass expected(c.g, c.n, c.D);
      if (rank != 0)
        expected.add_term(0, DecoratedGraph::undecorated(trivial_graph(c.g, c.n)), Rational(rank));
      const TautClass actual = rmatrix_action(calculators[k], identity_r_matrix(c.datum, c.D),
                                              c.g, c.n, labels, c.D, opts);
      identity.check(actual == expected, [&] {
        return type_str(c.g, c.n) + " labels " + labels_str(labels) + ": expected rank " +
               str(rank) + " on the trivial graph only, got " + std::to_string(actual.size()) +
               " terms";
      });
    }
  }
  identity.add_to(report, "identity R returns rank * [trivial graph]");

  // Unit-labeled edges.
  Collector unit("unit-edges-vanish");
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const Case& c = cases[k];
    const auto series = edge_factor_series(c.datum.weight(c.datum.unit()), 8);
    unit.check(std::all_of(series.begin(), series.end(), [](const Rational& q) { return q == 0; }),
               [&] { return std::string("edge factor of the unit label is nonzero"); });
    const DiagonalRMatrix W = verlinde_w_matrix(c.datum, c.D);
    const std::vector<Label> labels(c.n, c.datum.unit());
    EvalOptions only_unit = opts;
    only_unit.edge_labels = {c.datum.unit()};
    const TautClass unit_sum = rmatrix_action(calculators[k], W, c.g, c.n, labels, c.D, only_unit);
    const TautClass full = rmatrix_action(calculators[k], W, c.g, c.n, labels, c.D, opts);
    unit.check(unit_sum == restrict(full, Locus::smooth), [&] {
      return type_str(c.g, c.n) + ": unit-labeled edges changed the graph sum";
    });
    EvalOptions no_prune = opts;
    no_prune.prune = false;
    const TautClass unpruned = rmatrix_action(calculators[k], W, c.g, c.n, labels, c.D, no_prune);
    unit.check(unpruned == full, [&] {
      return type_str(c.g, c.n) + ": pruned and unpruned evaluations differ";
    });
  }
  unit.add_to(report, "graph terms with a unit-labeled edge contribute zero");

  // canonical_form idempotence.
  Collector canon("canonical-form-idempotence");
  std::vector<StableGraph> pool;
  for (auto [g, n] : std::vector<std::pair<int, int>>{{2, 2}, {1, 3}, {0, 5}})
    for (auto& gr : enumerate_stable_graphs(g, n, 3)) pool.push_back(std::move(gr));
  std::uniform_int_distribution<std::size_t> pick_graph(0, pool.size() - 1);
  std::uniform_int_distribution<int> pick_exp(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    DecoratedGraph d = DecoratedGraph::undecorated(pool[pick_graph(rng)]);
    for (auto& h : d.hpsi) h = {pick_exp(rng), pick_exp(rng)};
    for (auto& l : d.lpsi) l = pick_exp(rng);
    const DecoratedGraph relabeled = random_relabeling(d, rng);
    const DecoratedGraph a = canonical_form(d);
    const DecoratedGraph b = canonical_form(relabeled);
    canon.check(a == b && canonical_form(a) == a &&
                    automorphism_order(d) == automorphism_order(relabeled),
                [&] { return describe(d) + " vs relabeling " + describe(relabeled); });
  }
  canon.add_to(report, "canonical_form invariant under relabeling and idempotent");
}

struct SuiteEntry {
  std::string name;
  double budget;
  std::function<void(SuiteReport&, const EvalOptions&)> run;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> all{
      {"ranks", 1, [](SuiteReport& r, const EvalOptions&) { ranks_suite(r); }},
      {"slope", 10, slope_suite},
      {"prop52", 60, compact_type_suite},
      {"twoloop", 60, twoloop_suite},
      {"symplectic", 1, [](SuiteReport& r, const EvalOptions&) { symplectic_suite(r); }},
      {"graphs", 30, [](SuiteReport& r, const EvalOptions&) { graphs_suite(r); }},
      {"properties", 60, properties_suite},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.push_back(s.name);
    return out;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const EvalOptions& opts) {
  for (const auto& entry : registry()) {
    if (entry.name != name) continue;
    SuiteReport report;
    report.suite = name;
    report.budget_seconds = entry.budget;
    const auto start = std::chrono::steady_clock::now();
    try {
      entry.run(report, opts);
    } catch (const std::exception& e) {
      report.checks.push_back({"exception", false, e.what()});
    }
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }
  throw InvalidInput("unknown suite '" + name + "'");
}

std::vector<SuiteReport> run_suites(const std::string& name, const EvalOptions& opts) {
  std::vector<SuiteReport> out;
  if (name == "all") {
    for (const auto& n : suite_names()) out.push_back(run_suite(n, opts));
  } else {
    out.push_back(run_suite(name, opts));
  }
  return out;
}

}  // namespace verlinde::verify
