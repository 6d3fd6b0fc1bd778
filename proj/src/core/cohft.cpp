#include "verlinde/cohft.hpp"

#include "verlinde/error.hpp"
#include "verlinde/series.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace verlinde {

int DiagonalRMatrix::degree() const {
  if (entries.empty()) return -1;
  std::size_t d = entries.front().size();
  for (const auto& e : entries) d = std::min(d, e.size());
  return static_cast<int>(d) - 1;
}

std::vector<Rational> edge_factor_series(const Rational& w, int D) {
  std::vector<Rational> c;
  if (D < 0) return c;
  c.reserve(D + 1);
  Rational term = w;  // w^{k+1} / (k+1)!
  for (int k = 0; k <= D; ++k) {
    if (k > 0) term = term * w / (k + 1);
    c.push_back(-term);
  }
  return c;
}

DiagonalRMatrix verlinde_w_matrix(const FusionDatum& datum, int D) {
  DiagonalRMatrix R;
  for (Label a = 0; a < datum.size(); ++a) R.entries.push_back(exp_series(datum.weight(a), D));
  return R;
}

DiagonalRMatrix identity_r_matrix(const FusionDatum& datum, int D) {
  DiagonalRMatrix R;
  std::vector<Rational> one(D + 1, Rational(0));
  one[0] = 1;
  R.entries.assign(datum.size(), one);
  return R;
}

bool symplectic_check(const FusionDatum& datum, const DiagonalRMatrix& R, int D) {
  if (static_cast<int>(R.entries.size()) != datum.size() || R.degree() < D) return false;
  for (Label a = 0; a < datum.size(); ++a) {
    if (R.entries[a][0] != 1) return false;
    const auto& other = R.entries[datum.dual(a)];
    std::vector<Rational> reflected(D + 1);
    for (int k = 0; k <= D; ++k) reflected[k] = k % 2 == 0 ? other[k] : Rational(-other[k]);
    auto product = series_product(R.entries[a], reflected, D);
    for (int k = 0; k <= D; ++k)
      if (product[k] != (k == 0 ? 1 : 0)) return false;
  }
  return true;
}

namespace {

void check_labels(const FusionDatum& datum, int g, int n, std::span<const Label> labels) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0)
    throw InvalidInput("unstable type (g,n) = (" + std::to_string(g) + "," + std::to_string(n) +
                       ")");
  if (static_cast<int>(labels.size()) != n)
    throw InvalidInput("expected " + std::to_string(n) + " labels, got " +
                       std::to_string(labels.size()));
  for (Label a : labels)
    if (a < 0 || a >= datum.size()) throw InvalidInput("label out of range");
}

// Contribution of one stable graph to the R-matrix action.
class GraphTerm {
 public:
  GraphTerm(const RankCalculator& ranks, const DiagonalRMatrix& R,
            const std::vector<std::vector<std::vector<Rational>>>& quotients,
            const std::vector<bool>& skip_edge, bool prune, std::span<const Label> labels, int D)
      : ranks_(ranks),
        datum_(ranks.datum()),
        R_(R),
        quotients_(quotients),
        skip_edge_(skip_edge),
        prune_(prune),
        labels_(labels),
        D_(D) {}

  void add_to(const StableGraph& graph, TautClass& out) {
    const int n = graph.num_legs(), E = graph.num_edges(), V = graph.num_vertices();
    budget_ = D_ - E;
    if (budget_ < 0) return;
    graph_ = &graph;
    vars_ = n + 2 * E;
    DecorationCanonicalizer canon(graph);

    done_at_.assign(E, {});
    std::vector<int> last(V, -1);
    for (int e = 0; e < E; ++e)
      for (int s = 0; s < 2; ++s) last[graph.edges[e][s]] = e;
    Integer weight = 1;
    half_edge_label_.assign(E, {0, 0});
    for (int v = 0; v < V; ++v) {
      if (last[v] >= 0) {
        done_at_[last[v]].push_back(v);
      } else {
        weight *= vertex_rank(v);
      }
    }
    sum_ = Polynomial(vars_);
    if (weight != 0 || !prune_) assign(0, Polynomial::constant(vars_, 1), weight);
    if (sum_.is_zero()) return;

    Polynomial legs = Polynomial::constant(vars_, 1);
    for (int i = 0; i < n; ++i)
      legs = legs.multiply(Polynomial::univariate(vars_, i, R_.entries[labels_[i]], budget_),
                           budget_);
    Polynomial total = legs.multiply(sum_, budget_);

    const Rational inv_aut = ratio(1ul, static_cast<unsigned long>(canon.automorphism_order()));
    std::vector<std::array<int, 2>> hpsi(E);
    std::vector<int> lpsi(n);
    for (const auto& [exps, coeff] : total.terms()) {
      for (int i = 0; i < n; ++i) lpsi[i] = exps[i];
      for (int e = 0; e < E; ++e) hpsi[e] = {exps[n + 2 * e], exps[n + 2 * e + 1]};
      out.add_canonical_term(0, canon.canonical(hpsi, lpsi), coeff * inv_aut);
    }
  }

 private:
  Integer vertex_rank(int v) const {
    std::vector<Label> local;
    for (int i = 0; i < graph_->num_legs(); ++i)
      if (graph_->leg_vertex[i] == v) local.push_back(labels_[i]);
    for (int e = 0; e < graph_->num_edges(); ++e)
      for (int s = 0; s < 2; ++s)
        if (graph_->edges[e][s] == v) local.push_back(half_edge_label_[e][s]);
    return ranks_.rank(graph_->genus[v], local);
  }

  // Sum over labels of edges e.., pruning on vanishing vertex ranks and
  // vanishing edge factors.
  void assign(int e, const Polynomial& poly, const Integer& weight) {
    if (e == graph_->num_edges()) {
      Polynomial term = poly;
      term *= Rational(weight);
      sum_ += term;
      return;
    }
    for (Label mu = 0; mu < datum_.size(); ++mu) {
      if (skip_edge_[mu]) continue;
      half_edge_label_[e] = {mu, datum_.dual(mu)};
      Integer w = weight;
      for (int v : done_at_[e]) {
        w *= vertex_rank(v);
        if (w == 0 && prune_) break;
      }
      if (w == 0 && prune_) continue;
      Polynomial factor =
          Polynomial::bivariate(vars_, graph_->num_legs() + 2 * e, graph_->num_legs() + 2 * e + 1,
                                quotients_[mu], budget_);
      assign(e + 1, poly.multiply(factor, budget_), w);
    }
  }

  const RankCalculator& ranks_;
  const FusionDatum& datum_;
  const DiagonalRMatrix& R_;
  const std::vector<std::vector<std::vector<Rational>>>& quotients_;
  const std::vector<bool>& skip_edge_;
  bool prune_;
  std::span<const Label> labels_;
  int D_;

  const StableGraph* graph_ = nullptr;
  int budget_ = 0;
  int vars_ = 0;
  std::vector<std::vector<int>> done_at_;
  std::vector<std::array<Label, 2>> half_edge_label_;
  Polynomial sum_{0};
};

}  // namespace

TautClass rmatrix_action(const RankCalculator& ranks, const DiagonalRMatrix& R, int g, int n,
                         std::span<const Label> labels, int D, const EvalOptions& opts) {
  const FusionDatum& datum = ranks.datum();
  check_labels(datum, g, n, labels);
  if (D < 0) throw InvalidInput("degree must be nonnegative");
  if (static_cast<int>(R.entries.size()) != datum.size())
    throw InvalidInput("R-matrix needs one entry per label");
  if (R.degree() < D) throw InvalidInput("R-matrix is not known through the requested degree");
  if (!symplectic_check(datum, R, D)) throw InvalidInput("R-matrix is not symplectic");

  // Edge factor for label mu on side 0 and mu* on side 1.
  std::vector<std::vector<std::vector<Rational>>> quotients(datum.size());
  std::vector<bool> zero_edge(datum.size(), true);
  if (D >= 1)
    for (Label mu = 0; mu < datum.size(); ++mu) {
      quotients[mu] = edge_quotient(R.entries[mu], R.entries[datum.dual(mu)], D - 1);
      for (const auto& row : quotients[mu])
        for (const auto& q : row)
          if (q != 0) zero_edge[mu] = false;
    }

  std::vector<bool> skip_edge(datum.size(), false);
  for (Label mu = 0; mu < datum.size(); ++mu) {
    const bool allowed = opts.edge_labels.empty() ||
                         std::find(opts.edge_labels.begin(), opts.edge_labels.end(), mu) !=
                             opts.edge_labels.end();
    skip_edge[mu] = !allowed || (opts.prune && zero_edge[mu]);
  }

  const std::vector<StableGraph> graphs = enumerate_stable_graphs(g, n, D);
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::max(1u, std::min<unsigned>(threads, graphs.size()));

  std::vector<TautClass> partial(threads, TautClass(g, n, D));
  std::vector<std::exception_ptr> errors(threads);
  std::atomic<std::size_t> next{0};
  auto work = [&](unsigned t) {
    try {
      GraphTerm term(ranks, R, quotients, skip_edge, opts.prune, labels, D);
      for (std::size_t i; (i = next.fetch_add(1)) < graphs.size();) term.add_to(graphs[i], partial[t]);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (unsigned t = 1; t < threads; ++t) partial[0].accumulate(partial[t]);
  return std::move(partial[0]);
}

TautClass rmatrix_action(const FusionDatum& datum, const DiagonalRMatrix& R, int g, int n,
                         std::span<const Label> labels, int D, const EvalOptions& opts) {
  return rmatrix_action(RankCalculator(datum), R, g, n, labels, D, opts);
}

TautClass verlinde_chern_character(const RankCalculator& ranks, int g, int n,
                                   std::span<const Label> labels, int D,
                                   const EvalOptions& opts) {
  const FusionDatum& datum = ranks.datum();
  TautClass sum = rmatrix_action(ranks, verlinde_w_matrix(datum, D), g, n, labels, D, opts);
  return multiply_lambda_exponential(sum, anomaly_prefactor_exponent(datum));
}

TautClass verlinde_chern_character(const FusionDatum& datum, int g, int n,
                                   std::span<const Label> labels, int D,
                                   const EvalOptions& opts) {
  return verlinde_chern_character(RankCalculator(datum), g, n, labels, D, opts);
}

TautClass projectively_flat_character(const FusionDatum& datum, int g, int n,
                                      std::span<const Label> labels, const Integer& rank, int D) {
  check_labels(datum, g, n, labels);
  // Variable 0 is lambda_1, variable i is psi_i.
  Polynomial linear(n + 1);
  std::vector<int> e(n + 1, 0);
  e[0] = 1;
  linear.add_term(e, anomaly_prefactor_exponent(datum));
  for (int i = 0; i < n; ++i) {
    std::fill(e.begin(), e.end(), 0);
    e[i + 1] = 1;
    linear.add_term(e, datum.weight(labels[i]));
  }
  Polynomial total(n + 1);
  Polynomial power = Polynomial::constant(n + 1, 1);
  for (int d = 0; d <= D; ++d) {
    Polynomial term = power;
    term *= ratio(rank, factorial(d));
    total += term;
    power = power.multiply(linear, D);
  }
  TautClass out(g, n, D);
  for (const auto& [exps, coeff] : total.terms()) {
    DecoratedGraph d = DecoratedGraph::undecorated(trivial_graph(g, n));
    d.lpsi.assign(exps.begin() + 1, exps.end());
    out.add_canonical_term(exps[0], std::move(d), coeff);
  }
  return out;
}

bool slope_restriction_check(const FusionDatum& datum, int g, int n,
                             std::span<const Label> labels, int D) {
  check_labels(datum, g, n, labels);
  RankCalculator ranks(datum);
  Integer rank = ranks.rank(g, labels);
  if (rank == 0) throw InvalidInput("rank vanishes; the character is zero by convention");
  TautClass smooth = restrict(verlinde_chern_character(ranks, g, n, labels, D), Locus::smooth);
  return smooth == projectively_flat_character(datum, g, n, labels, rank, D);
}

EdgeWeightAssignment slr_tree_remainders(int r, const StableGraph& tree,
                                         std::span<const Label> labels) {
  if (r < 2) throw InvalidInput("r must be >= 2");
  tree.validate();
  if (!tree.is_tree()) throw InvalidInput("remainder assignment needs a tree");
  if (static_cast<int>(labels.size()) != tree.num_legs())
    throw InvalidInput("one label per leg required");
  long total = 0;
  for (Label a : labels) {
    if (a < 0 || a >= r) throw InvalidInput("label out of range for sl_r level 1");
    total += a;
  }
  if (total % r != 0) throw InvalidInput("labels do not sum to 0 mod r");

  EdgeWeightAssignment out;
  for (int e = 0; e < tree.num_edges(); ++e) {
    // The half-edge on side 0 balances everything hanging off that side.
    std::vector<bool> seen(tree.num_vertices(), false);
    std::vector<int> stack{tree.edges[e][0]};
    seen[stack.back()] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int f = 0; f < tree.num_edges(); ++f) {
        if (f == e) continue;
        for (int s = 0; s < 2; ++s)
          if (tree.edges[f][s] == v && !seen[tree.edges[f][1 - s]]) {
            seen[tree.edges[f][1 - s]] = true;
            stack.push_back(tree.edges[f][1 - s]);
          }
      }
    }
    long side = 0;
    for (int i = 0; i < tree.num_legs(); ++i)
      if (seen[tree.leg_vertex[i]]) side += labels[i];
    Label rem = static_cast<Label>(((-side) % r + r) % r);
    out.side0.push_back(rem);
    out.weight.push_back(ratio(rem * (r - rem), 2 * r));
  }
  return out;
}

TautClass compact_type_closed_form(int r, int g, int n, std::span<const Label> labels, int D) {
  const FusionDatum datum = builtin_slr_level1(r);
  check_labels(datum, g, n, labels);
  if (D < 0) throw InvalidInput("degree must be nonnegative");
  std::vector<Rational> psi;
  for (Label a : labels) psi.push_back(datum.weight(a));
  std::vector<std::pair<DivisorSymbol, Rational>> divisors;
  for (auto& d : separating_divisors(g, n)) {
    Rational w = slr_tree_remainders(r, d.graph(), labels).weight.front();
    divisors.emplace_back(std::move(d), Rational(-w));
  }
  TautClass ch = exp_of_divisor_combination(g, n, anomaly_prefactor_exponent(datum), psi,
                                            divisors, D);
  Integer scale_factor;
  mpz_ui_pow_ui(scale_factor.get_mpz_t(), r, g);
  return restrict(scale(ch, Rational(scale_factor)), Locus::compact_type);
}

std::vector<TwoLoopRow> two_loop_report(int g, int n, int D, const EvalOptions& opts) {
  if (g < 2) throw InvalidInput("two-loop report needs g >= 2");
  if (n % 2 != 0) throw InvalidInput("two-loop report needs an even number of markings");
  if (D < 2) throw InvalidInput("two-loops live in degree 2; need D >= 2");
  const FusionDatum datum = builtin_sl2(1);
  const std::vector<Label> labels(n, 1);
  TautClass ch = verlinde_chern_character(datum, g, n, labels, D, opts);

  std::vector<TwoLoopRow> rows;
  for (auto& loop : two_loop_graphs(g, n)) {
    TwoLoopRow row;
    row.automorphisms = automorphism_order(loop.graph);
    row.vertex_rank = 1;
    for (int gv : loop.graph.genus) row.vertex_rank <<= gv;
    row.raw = ch.coefficient_of(0, DecoratedGraph::undecorated(loop.graph));
    row.normalized =
        row.raw * Rational(static_cast<unsigned long>(row.automorphisms)) / Rational(row.vertex_rank);
    row.loop = std::move(loop);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace verlinde
