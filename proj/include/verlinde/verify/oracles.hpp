#pragma once

// Independent reference computations used by the verification suites and
// the tests. Nothing here calls the enumerator, the canonical labeling or the
// rank recursion of the core library.

#include "verlinde/fusion.hpp"
#include "verlinde/graph.hpp"
#include "verlinde/rational.hpp"

#include <span>
#include <vector>

namespace verlinde::oracle {

/// eps(mu_1 * ... * mu_n * h^g) in the fusion ring, h = sum_nu nu * nu*,
/// with structure constants N_ab^c = n3(a, b, c*).
Integer fusion_ring_rank(const FusionDatum& datum, int g, std::span<const Label> labels);

/// Gluing recursion in the opposite order: peel the last two markings off
/// into a three-point sphere first, reduce genus only once n <= 2.
Integer markings_first_rank(const FusionDatum& datum, int g, std::span<const Label> labels);

struct LabeledGraph {
  StableGraph graph;
  std::size_t automorphisms;
};

/// Every labeled stable graph of type (g,n) with <= max_edges edges,
/// quotiented by brute-force isomorphism testing. Automorphisms are counted
/// as half-edge permutations.
std::vector<LabeledGraph> brute_force_stable_graphs(int g, int n, int max_edges);

/// Vertex bijection preserving genus, legs and the edge multiset.
bool brute_isomorphic(const StableGraph& a, const StableGraph& b);

/// Permutations of half-edges preserving the edge pairing that induce a
/// genus- and leg-preserving vertex bijection.
std::size_t brute_automorphisms(const StableGraph& g);

/// Raw degree-2 coefficient of a 2-loop in the sl_2 level-1 character with
/// all labels 1: 2^{g - h1} (1/4)^2 / |Aut| for box-even graphs, else 0.
Rational two_loop_hand_coefficient(const StableGraph& two_loop);

}  // namespace verlinde::oracle
