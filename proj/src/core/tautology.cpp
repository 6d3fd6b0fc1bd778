#include "verlinde/tautology.hpp"

#include "verlinde/error.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace verlinde {

TautClass::TautClass(int g, int n, int truncation) : g_(g), n_(n), truncation_(truncation) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0) throw InvalidInput("unstable ambient type (g,n)");
  if (truncation < 0) throw InvalidInput("truncation degree must be nonnegative");
}

TautClass TautClass::unit(int g, int n, int truncation) {
  TautClass c(g, n, truncation);
  c.add_canonical_term(0, DecoratedGraph::undecorated(trivial_graph(g, n)), 1);
  return c;
}

void TautClass::check_ambient(const DecoratedGraph& d) const {
  if (d.graph.num_legs() != n_ || d.graph.arithmetic_genus() != g_)
    throw InvalidInput("graph does not have the ambient type (g,n)");
}

void TautClass::add_term(int lambda_power, const DecoratedGraph& d, const Rational& c) {
  if (lambda_power < 0) throw InvalidInput("negative lambda power");
  check_ambient(d);
  if (c == 0 || lambda_power + d.degree() > truncation_) return;
  add_canonical_term(lambda_power, canonical_form(d), c);
}

void TautClass::add_canonical_term(int lambda_power, DecoratedGraph d, const Rational& c) {
  const int degree = lambda_power + d.degree();
  if (c == 0 || degree > truncation_) return;
  TermKey key{degree, lambda_power, decorated_key(d)};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), Term{lambda_power, std::move(d), c});
    return;
  }
  it->second.coeff += c;
  if (it->second.coeff == 0) terms_.erase(it);
}

Rational TautClass::coefficient_of(int lambda_power, const DecoratedGraph& d) const {
  check_ambient(d);
  DecoratedGraph canon = canonical_form(d);
  TermKey key{lambda_power + canon.degree(), lambda_power, decorated_key(canon)};
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second.coeff;
}

TautClass& TautClass::accumulate(const TautClass& other, const Rational& factor) {
  if (other.g_ != g_ || other.n_ != n_) throw InvalidInput("ambient type mismatch");
  if (factor == 0) return *this;
  for (const auto& [key, term] : other.terms_)
    add_canonical_term(term.lambda, term.graph, term.coeff * factor);
  return *this;
}

bool TautClass::operator==(const TautClass& other) const {
  if (g_ != other.g_ || n_ != other.n_ || terms_.size() != other.terms_.size()) return false;
  for (auto a = terms_.begin(), b = other.terms_.begin(); a != terms_.end(); ++a, ++b)
    if (a->first != b->first || a->second.coeff != b->second.coeff) return false;
  return true;
}

TautClass add(const TautClass& a, const TautClass& b) {
  if (a.genus() != b.genus() || a.markings() != b.markings())
    throw InvalidInput("ambient type mismatch");
  TautClass out(a.genus(), a.markings(), std::min(a.truncation(), b.truncation()));
  out.accumulate(a);
  out.accumulate(b);
  return out;
}

TautClass scale(const TautClass& a, const Rational& q) {
  TautClass out(a.genus(), a.markings(), a.truncation());
  out.accumulate(a, q);
  return out;
}

TautClass restrict(const TautClass& c, Locus locus) {
  TautClass out(c.genus(), c.markings(), c.truncation());
  for (const auto& [key, term] : c.terms())
    if (lies_in(term.graph.graph, c.genus(), locus))
      out.add_canonical_term(term.lambda, term.graph, term.coeff);
  return out;
}

TautClass multiply_lambda_exponential(const TautClass& c, const Rational& a) {
  TautClass out(c.genus(), c.markings(), c.truncation());
  const auto series = exp_series(a, c.truncation());
  for (const auto& [key, term] : c.terms())
    for (int p = 0; key.degree + p <= c.truncation(); ++p)
      out.add_canonical_term(term.lambda + p, term.graph, term.coeff * series[p]);
  return out;
}

TautClass multiply_psi_exponential(const TautClass& c, std::span<const Rational> b) {
  const int n = c.markings();
  if (static_cast<int>(b.size()) != n) throw InvalidInput("need one psi coefficient per marking");
  std::vector<std::vector<Rational>> series(n);
  for (int i = 0; i < n; ++i) series[i] = exp_series(b[i], c.truncation());

  TautClass out(c.genus(), n, c.truncation());
  for (const auto& [key, term] : c.terms()) {
    DecoratedGraph d = term.graph;
    auto recurse = [&](auto&& self, int i, int budget, const Rational& coeff) -> void {
      if (i == n) {
        // Legs are fixed by automorphisms, so d stays canonical.
        out.add_canonical_term(term.lambda, d, coeff);
        return;
      }
      const int base = d.lpsi[i];
      for (int k = 0; k <= budget; ++k) {
        if (k > 0 && b[i] == 0) break;
        d.lpsi[i] = base + k;
        self(self, i + 1, budget - k, coeff * series[i][k]);
      }
      d.lpsi[i] = base;
    };
    recurse(recurse, 0, c.truncation() - key.degree, term.coeff);
  }
  return out;
}

TautClass zero_lambda(const TautClass& c) {
  TautClass out(c.genus(), c.markings(), c.truncation());
  for (const auto& [key, term] : c.terms())
    if (term.lambda == 0) out.add_canonical_term(0, term.graph, term.coeff);
  return out;
}

TautClass relabel_markings(const TautClass& c, std::span<const int> perm) {
  const int n = c.markings();
  if (static_cast<int>(perm.size()) != n) throw InvalidInput("permutation has the wrong length");
  std::vector<int> seen(n, 0);
  for (int p : perm) {
    if (p < 1 || p > n || seen[p - 1]++) throw InvalidInput("not a permutation of 1..n");
  }
  TautClass out(c.genus(), n, c.truncation());
  for (const auto& [key, term] : c.terms()) {
    DecoratedGraph d = term.graph;
    for (int i = 0; i < n; ++i) {
      d.graph.leg_vertex[perm[i] - 1] = term.graph.graph.leg_vertex[i];
      d.lpsi[perm[i] - 1] = term.graph.lpsi[i];
    }
    out.add_term(term.lambda, d, term.coeff);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Divisors

namespace {

Side side_of(const StableGraph& g, const std::vector<bool>& in_side) {
  Side s{0, 0};
  for (int v = 0; v < g.num_vertices(); ++v)
    if (in_side[v]) s.genus += g.genus[v];
  for (int i = 0; i < g.num_legs(); ++i)
    if (in_side[g.leg_vertex[i]]) s.markings |= std::uint64_t{1} << i;
  return s;
}

using Split = std::pair<Side, Side>;

Split normalized(Side a, Side b) { return a < b ? Split{a, b} : Split{b, a}; }

// Split induced by a separating edge of a tree.
Split edge_split(const StableGraph& tree, int edge) {
  std::vector<bool> seen(tree.num_vertices(), false);
  std::vector<int> stack{tree.edges[edge][0]};
  seen[stack.back()] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e = 0; e < tree.num_edges(); ++e) {
      if (e == edge) continue;
      for (int s = 0; s < 2; ++s)
        if (tree.edges[e][s] == v && !seen[tree.edges[e][1 - s]]) {
          seen[tree.edges[e][1 - s]] = true;
          stack.push_back(tree.edges[e][1 - s]);
        }
    }
  }
  Side a = side_of(tree, seen);
  std::vector<bool> rest(seen.size());
  for (std::size_t v = 0; v < seen.size(); ++v) rest[v] = !seen[v];
  return normalized(a, side_of(tree, rest));
}

struct RealizedTree {
  StableGraph tree;
  std::vector<Split> edge_splits;
};

using TreeIndex = std::map<std::vector<Split>, std::vector<RealizedTree>>;

// Stable trees of type (g,n) with exactly `edges` edges, grouped by their
// sorted edge splits. One split set can have several realizations when an
// unmarked side can hang on either end of another edge.
const TreeIndex& tree_index(int g, int n, int edges) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, TreeIndex> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(g, n, edges);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  TreeIndex index;
  for (auto& graph : enumerate_stable_graphs(g, n, edges)) {
    if (graph.num_edges() != edges || !graph.is_tree()) continue;
    RealizedTree r{graph, {}};
    for (int e = 0; e < edges; ++e) r.edge_splits.push_back(edge_split(graph, e));
    std::vector<Split> sorted = r.edge_splits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    index[std::move(sorted)].push_back(std::move(r));
  }
  return cache.emplace(key, std::move(index)).first->second;
}

void check_divisor(const DivisorSymbol& d, int g, int n, CorrectionPolicy policy) {
  if (d.graph().num_legs() != n || d.graph().arithmetic_genus() != g)
    throw InvalidInput("divisor does not live on the ambient Mbar_{g,n}");
  if (!d.is_separating()) throw InvalidInput("non-separating divisor symbol: " + describe(d.graph()));
  if (policy == CorrectionPolicy::check && !satisfies_no_correction(d, g))
    throw UnsupportedOperation("self-intersection of " + describe(d.graph()) +
                               " needs correction terms (unmarked side of genus <= g/2)");
}

}  // namespace

DivisorSymbol::DivisorSymbol(const StableGraph& graph) {
  graph.validate();
  if (graph.num_edges() != 1) throw InvalidInput("a divisor symbol needs exactly one edge");
  graph_ = canonical_form(graph);
}

DivisorSymbol DivisorSymbol::separating(int g, int n, int side_genus,
                                        const std::vector<int>& side_markings) {
  if (side_genus < 0 || side_genus > g) throw InvalidInput("side genus out of range");
  StableGraph graph{{side_genus, g - side_genus}, std::vector<int>(n, 1), {{0, 1}}};
  for (int m : side_markings) {
    if (m < 1 || m > n) throw InvalidInput("marking out of range");
    graph.leg_vertex[m - 1] = 0;
  }
  return DivisorSymbol(graph);
}

std::pair<Side, Side> DivisorSymbol::sides() const {
  if (!is_separating()) throw InvalidInput("a self-loop divisor has no sides");
  std::vector<bool> first{true, false};
  return normalized(side_of(graph_, first), side_of(graph_, {false, true}));
}

std::vector<DivisorSymbol> separating_divisors(int g, int n) {
  std::vector<DivisorSymbol> out;
  for (const auto& graph : enumerate_stable_graphs(g, n, 1))
    if (graph.num_vertices() == 2) out.emplace_back(graph);
  return out;
}

bool satisfies_no_correction(const DivisorSymbol& d, int g) {
  auto [a, b] = d.sides();
  auto ok = [g](const Side& s) { return s.markings != 0 || 2 * s.genus > g; };
  return ok(a) && ok(b);
}

TautClass divisor_monomial_expand(int g, int n,
                                  std::span<const std::pair<DivisorSymbol, int>> factors,
                                  std::span<const int> leg_psi, CorrectionPolicy policy,
                                  int truncation) {
  std::map<DivisorSymbol, int> merged;
  for (const auto& [d, k] : factors) {
    if (k < 1) throw InvalidInput("divisor exponent must be >= 1");
    check_divisor(d, g, n, policy);
    merged[d] += k;
  }
  std::vector<int> lpsi(n, 0);
  if (!leg_psi.empty()) {
    if (static_cast<int>(leg_psi.size()) != n) throw InvalidInput("leg_psi needs n entries");
    lpsi.assign(leg_psi.begin(), leg_psi.end());
  }
  int degree = std::accumulate(lpsi.begin(), lpsi.end(), 0);
  for (int k : lpsi)
    if (k < 0) throw InvalidInput("negative psi exponent");
  for (const auto& [d, k] : merged) degree += k;

  TautClass out(g, n, truncation < 0 ? degree : truncation);
  if (merged.empty()) {
    DecoratedGraph d = DecoratedGraph::undecorated(trivial_graph(g, n));
    d.lpsi = lpsi;
    out.add_canonical_term(0, std::move(d), 1);
    return out;
  }

  std::map<Split, int> exponent;
  std::vector<Split> splits;
  for (const auto& [d, k] : merged) {
    splits.push_back(d.sides());
    exponent[splits.back()] = k;
  }
  std::sort(splits.begin(), splits.end());
  const TreeIndex& index = tree_index(g, n, static_cast<int>(splits.size()));
  auto it = index.find(splits);
  if (it == index.end()) return out;  // not jointly realizable

  // Transverse product: every realizing tree Gamma, weighted 1/|Aut Gamma|,
  // with prod_e (-psi'_e - psi''_e)^{k_e - 1} on its edges.
  for (const RealizedTree& realized : it->second) {
    const int E = realized.tree.num_edges();
    DecorationCanonicalizer canon(realized.tree);
    const Rational inv_aut = ratio(1ul, static_cast<unsigned long>(canon.automorphism_order()));
    std::vector<std::array<int, 2>> hpsi(E, {0, 0});
    auto recurse = [&](auto&& self, int e, const Rational& coeff) -> void {
      if (e == E) {
        out.add_canonical_term(0, canon.canonical(hpsi, lpsi), coeff);
        return;
      }
      const int m = exponent.at(realized.edge_splits[e]) - 1;
      const int sign = m % 2 == 0 ? 1 : -1;
      for (int a = 0; a <= m; ++a) {
        hpsi[e] = {a, m - a};
        self(self, e + 1, coeff * sign * Rational(binomial(m, a)));
      }
      hpsi[e] = {0, 0};
    };
    recurse(recurse, 0, inv_aut);
  }
  return out;
}

TautClass exp_of_divisor_combination(
    int g, int n, const Rational& lambda_coeff, std::span<const Rational> psi_coeffs,
    std::span<const std::pair<DivisorSymbol, Rational>> divisor_coeffs, int D,
    CorrectionPolicy policy) {
  if (static_cast<int>(psi_coeffs.size()) != n)
    throw InvalidInput("need one psi coefficient per marking");
  std::map<DivisorSymbol, Rational> merged;
  for (const auto& [d, c] : divisor_coeffs) merged[d] += c;
  std::vector<std::pair<DivisorSymbol, Rational>> active;
  for (const auto& [d, c] : merged)
    if (c != 0) {
      check_divisor(d, g, n, policy);
      active.emplace_back(d, c);
    }

  TautClass sum(g, n, D);
  std::vector<std::pair<DivisorSymbol, int>> factors;
  // sum over multisets of divisors: prod_e c_e^{m_e} / m_e! * prod_e delta_e^{m_e}
  auto recurse = [&](auto&& self, std::size_t i, int budget, const Rational& coeff) -> void {
    if (i == active.size()) {
      sum.accumulate(divisor_monomial_expand(g, n, factors, {}, policy, D), coeff);
      return;
    }
    self(self, i + 1, budget, coeff);
    Rational c = coeff;
    for (int m = 1; m <= budget; ++m) {
      c = c * active[i].second / m;
      factors.emplace_back(active[i].first, m);
      self(self, i + 1, budget - m, c);
      factors.pop_back();
    }
  };
  recurse(recurse, 0, D, Rational(1));
  return multiply_lambda_exponential(multiply_psi_exponential(sum, psi_coeffs), lambda_coeff);
}

}  // namespace verlinde
