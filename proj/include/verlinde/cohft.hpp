#pragma once

#include "verlinde/fusion.hpp"
#include "verlinde/graph.hpp"
#include "verlinde/rational.hpp"
#include "verlinde/tautology.hpp"

#include <span>
#include <vector>

namespace verlinde {

/// Diagonal R(z) in the label basis: entries[mu] holds the coefficients of
/// R_mu(z) through z^degree.
struct DiagonalRMatrix {
  std::vector<std::vector<Rational>> entries;

  int degree() const;
};

/// Coefficients c_k of (psi' + psi'')^k in (1 - exp(w (psi' + psi''))) / (psi' + psi''),
/// k = 0..D: c_k = -w^{k+1} / (k+1)!.
std::vector<Rational> edge_factor_series(const Rational& w, int D);

/// W(z)_mu = exp(z * weight(mu)) through degree D.
DiagonalRMatrix verlinde_w_matrix(const FusionDatum& datum, int D);
DiagonalRMatrix identity_r_matrix(const FusionDatum& datum, int D);

/// R_mu(z) R_{mu*}(-z) = 1 through degree D for every label, and constant
/// terms equal to 1.
bool symplectic_check(const FusionDatum& datum, const DiagonalRMatrix& R, int D);

struct EvalOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  /// Skip edge labels whose edge factor vanishes and assignments with a
  /// vanishing vertex rank. Turning this off changes only the running time.
  bool prune = true;
  /// Restrict edge labels to this set (empty: all labels).
  std::vector<Label> edge_labels;
};

/// Givental action of a diagonal symplectic R on the rank TQFT, summed over
/// stable graphs with at most D edges, through degree D. R must be given at
/// least through degree D.
TautClass rmatrix_action(const RankCalculator& ranks, const DiagonalRMatrix& R, int g, int n,
                         std::span<const Label> labels, int D, const EvalOptions& opts = {});
TautClass rmatrix_action(const FusionDatum& datum, const DiagonalRMatrix& R, int g, int n,
                         std::span<const Label> labels, int D, const EvalOptions& opts = {});

/// ch E_g(mu_1..mu_n) through degree D: exp(-c/2 lambda_1) times the
/// W-matrix graph sum.
TautClass verlinde_chern_character(const RankCalculator& ranks, int g, int n,
                                   std::span<const Label> labels, int D,
                                   const EvalOptions& opts = {});
TautClass verlinde_chern_character(const FusionDatum& datum, int g, int n,
                                   std::span<const Label> labels, int D,
                                   const EvalOptions& opts = {});

/// rank * exp(-c/2 lambda_1 + sum_i w(mu_i) psi_i) on the trivial graph,
/// expanded as sum_d (linear form)^d / d! by the multinomial theorem.
TautClass projectively_flat_character(const FusionDatum& datum, int g, int n,
                                      std::span<const Label> labels, const Integer& rank, int D);

/// Smooth-locus restriction of the character equals the projectively flat
/// form through degree D. Throws InvalidInput when the rank vanishes.
bool slope_restriction_check(const FusionDatum& datum, int g, int n,
                             std::span<const Label> labels, int D = 3);

/// Edge labels: label on side 0 of each edge (side 1 carries its dual) and
/// the resulting edge weight.
struct EdgeWeightAssignment {
  std::vector<Label> side0;
  std::vector<Rational> weight;
};

/// Unique remainder assignment mod r on a tree for sl_r level 1 labels.
/// Throws InvalidInput for non-trees or when sum(labels) != 0 mod r.
EdgeWeightAssignment slr_tree_remainders(int r, const StableGraph& tree,
                                         std::span<const Label> labels);

/// r^g exp(-(r-1)/2 lambda_1 + sum w_{mu_i} psi_i - sum_e w_e delta_e) over
/// the separating divisors, restricted to compact type, through degree D.
TautClass compact_type_closed_form(int r, int g, int n, std::span<const Label> labels, int D);

struct TwoLoopRow {
  TwoLoop loop;
  std::size_t automorphisms;
  Integer vertex_rank;  // prod_v 2^{g_v}
  Rational raw;         // coefficient of (lambda^0, Gamma, no psi)
  Rational normalized;  // raw * |Aut| / vertex_rank
};

/// sl_2 level 1, all labels = 1 (n even, g >= 2): the degree-2 2-loop
/// coefficients of the character.
std::vector<TwoLoopRow> two_loop_report(int g, int n, int D = 2,
                                        const EvalOptions& opts = {});

}  // namespace verlinde
