#pragma once

#include "verlinde/graph.hpp"
#include "verlinde/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace verlinde {

/// Ordering of terms: total degree, then lambda power, then canonical
/// decorated encoding.
struct TermKey {
  int degree;
  int lambda;
  GraphKey graph;

  auto operator<=>(const TermKey&) const = default;
};

struct Term {
  int lambda;
  DecoratedGraph graph;  // canonical
  Rational coeff;
};

/// Finite Q-linear combination of lambda_1^a * xi_Gamma*(psi monomial) on
/// Mbar_{g,n}, truncated at a fixed degree. A stored coefficient q on
/// (a, Gamma, decoration) means exactly q * lambda_1^a * xi_Gamma*(monomial):
/// automorphism factors live in the coefficients. lambda_1 is a free symbol.
class TautClass {
 public:
  TautClass(int g, int n, int truncation);

  /// The unit class [trivial graph].
  static TautClass unit(int g, int n, int truncation);

  int genus() const noexcept { return g_; }
  int markings() const noexcept { return n_; }
  int truncation() const noexcept { return truncation_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::map<TermKey, Term>& terms() const noexcept { return terms_; }

  /// Canonicalizes d; silently drops terms above the truncation degree.
  void add_term(int lambda_power, const DecoratedGraph& d, const Rational& c);
  /// As add_term for a decorated graph already in canonical form.
  void add_canonical_term(int lambda_power, DecoratedGraph d, const Rational& c);

  Rational coefficient_of(int lambda_power, const DecoratedGraph& d) const;

  /// In-place sum; the other class must share the ambient type. Terms of
  /// `other` above this truncation are dropped.
  TautClass& accumulate(const TautClass& other, const Rational& factor = 1);

  /// Ambient type and terms; the truncation degree is not compared.
  bool operator==(const TautClass& other) const;

 private:
  void check_ambient(const DecoratedGraph& d) const;

  int g_;
  int n_;
  int truncation_;
  std::map<TermKey, Term> terms_;
};

/// Throws InvalidInput on ambient mismatch; truncation is the minimum.
TautClass add(const TautClass& a, const TautClass& b);
TautClass scale(const TautClass& a, const Rational& q);

/// Keeps terms whose graph lies in the locus (general keeps everything).
TautClass restrict(const TautClass& c, Locus locus);

/// exp(a * lambda_1) * c, truncated at c's truncation.
TautClass multiply_lambda_exponential(const TautClass& c, const Rational& a);
/// prod_i exp(b_i * psi_i) * c; psi_i acts on the vertex carrying leg i.
TautClass multiply_psi_exponential(const TautClass& c, std::span<const Rational> b);
/// Drops every term with a positive lambda power.
TautClass zero_lambda(const TautClass& c);
/// Renames marking i to perm[i-1] (perm is a permutation of 1..n).
TautClass relabel_markings(const TautClass& c, std::span<const int> perm);

/// One side of a one-edge graph: genus and marking set (bit i = marking i+1).
struct Side {
  int genus;
  std::uint64_t markings;

  auto operator<=>(const Side&) const = default;
};

/// The boundary divisor named by a one-edge stable graph.
class DivisorSymbol {
 public:
  /// Throws InvalidInput unless `graph` is a valid stable graph with exactly
  /// one edge.
  explicit DivisorSymbol(const StableGraph& graph);

  /// The separating divisor with one side of genus `side_genus` carrying
  /// `side_markings` (1-based).
  static DivisorSymbol separating(int g, int n, int side_genus,
                                  const std::vector<int>& side_markings);

  const StableGraph& graph() const noexcept { return graph_; }
  bool is_separating() const noexcept { return graph_.num_vertices() == 2; }
  /// Normalized sides (smaller first); only for separating divisors.
  std::pair<Side, Side> sides() const;

  auto operator<=>(const DivisorSymbol& o) const { return graph_ <=> o.graph_; }
  bool operator==(const DivisorSymbol& o) const { return graph_ == o.graph_; }

 private:
  StableGraph graph_;
};

/// All separating boundary divisors of Mbar_{g,n}, deterministically ordered.
std::vector<DivisorSymbol> separating_divisors(int g, int n);

/// delta^{k+1} = xi_*(-psi' - psi'')^k is exact for the divisor: every side
/// carries a marking or has genus above g/2.
bool satisfies_no_correction(const DivisorSymbol& d, int g);

enum class CorrectionPolicy {
  check,                  // reject divisors failing satisfies_no_correction
  assume_rational_tails,  // caller vouches for the rational-tails context
};

/// prod_i psi_i^{leg_psi[i]} * prod_j delta_j^{k_j} for pairwise distinct
/// separating divisors (repeated symbols are merged). The product is the sum,
/// over every stable tree whose edge splits are exactly the given divisors,
/// of 1/|Aut| times the tree stratum with prod_e (-psi'_e - psi''_e)^{k_e - 1};
/// no such tree gives the zero class. Truncation defaults to the monomial
/// degree.
TautClass divisor_monomial_expand(int g, int n,
                                  std::span<const std::pair<DivisorSymbol, int>> factors,
                                  std::span<const int> leg_psi,
                                  CorrectionPolicy policy = CorrectionPolicy::check,
                                  int truncation = -1);

/// exp(a*lambda_1 + sum_i b_i psi_i + sum_e c_e delta_e) through degree D.
/// Divisors with c_e = 0 are dropped before any check.
TautClass exp_of_divisor_combination(
    int g, int n, const Rational& lambda_coeff, std::span<const Rational> psi_coeffs,
    std::span<const std::pair<DivisorSymbol, Rational>> divisor_coeffs, int D,
    CorrectionPolicy policy = CorrectionPolicy::check);

}  // namespace verlinde
