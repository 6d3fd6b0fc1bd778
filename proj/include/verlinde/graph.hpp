#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace verlinde {

/// Dual graph of a stable curve.
///
/// Markings are numbered 1..n; marking i sits on vertex `leg_vertex[i-1]`.
/// A half-edge is (edge index, side) with side in {0,1}; `edges[e][s]` is the
/// vertex carrying it. Self-loops have both sides on one vertex.
struct StableGraph {
  std::vector<int> genus;
  std::vector<int> leg_vertex;
  std::vector<std::array<int, 2>> edges;

  int num_vertices() const noexcept { return static_cast<int>(genus.size()); }
  int num_edges() const noexcept { return static_cast<int>(edges.size()); }
  int num_legs() const noexcept { return static_cast<int>(leg_vertex.size()); }

  /// Half-edges plus legs at v.
  int valence(int v) const;
  /// First Betti number; assumes connectivity.
  int h1() const noexcept { return num_edges() - num_vertices() + 1; }
  /// sum g_v + h1.
  int arithmetic_genus() const;
  bool is_connected() const;
  /// No self-loops and exactly V-1 edges (given connectivity).
  bool is_tree() const;

  /// Throws InvalidInput unless indices are in range, the graph is connected
  /// and every vertex is stable.
  void validate() const;

  auto operator<=>(const StableGraph&) const = default;
};

/// One vertex of genus g carrying all n legs.
StableGraph trivial_graph(int g, int n);

/// A stable graph with psi-exponents on half-edges and legs.
struct DecoratedGraph {
  StableGraph graph;
  std::vector<std::array<int, 2>> hpsi;  // parallel to graph.edges
  std::vector<int> lpsi;                 // parallel to graph.leg_vertex

  static DecoratedGraph undecorated(StableGraph g);

  /// #edges + all psi exponents: the codimension of the class.
  int degree() const;
  void validate() const;

  auto operator<=>(const DecoratedGraph&) const = default;
};

using GraphKey = std::vector<int>;

/// A relabeling of a graph onto another: vertex v -> vertex[v], half-edge
/// (e, s) -> (edge[e], s ^ flip[e]). Legs are fixed.
struct HalfEdgeMap {
  std::vector<int> vertex;
  std::vector<int> edge;
  std::vector<std::uint8_t> flip;
};

struct Canonization {
  StableGraph graph;         // canonical representative
  GraphKey key;              // its encoding
  HalfEdgeMap to_canonical;  // input -> canonical
  std::size_t automorphism_order = 1;
};

/// Canonical labeling by backtracking over vertex orderings that respect the
/// (leg set, genus, valence, loop count) partition; the smallest encoding
/// wins. Edges of the result are oriented low-to-high and sorted.
Canonization canonize(const StableGraph& g);
StableGraph canonical_form(const StableGraph& g);
GraphKey canonical_key(const StableGraph& g);

/// Automorphisms fixing the legs pointwise, as half-edge maps of `g` to
/// itself. Size equals automorphism_order(g).
std::vector<HalfEdgeMap> automorphisms(const StableGraph& g);
std::size_t automorphism_order(const StableGraph& g);

/// Decorated graph carried along `map` (whose target has the same shape).
DecoratedGraph transport(const DecoratedGraph& d, const StableGraph& target,
                         const HalfEdgeMap& map);

/// Canonical decorated representative: canonical underlying graph, then the
/// lexicographically smallest half-edge decoration over its automorphisms.
DecoratedGraph canonical_form(const DecoratedGraph& d);
/// Encoding of a decorated graph already in canonical form.
GraphKey decorated_key(const DecoratedGraph& canonical);
/// Automorphisms of the underlying graph that preserve the decoration.
std::size_t automorphism_order(const DecoratedGraph& d);

/// Canonicalizes decorations of one fixed canonical graph using its
/// precomputed automorphism group.
class DecorationCanonicalizer {
 public:
  explicit DecorationCanonicalizer(StableGraph canonical_graph);

  const StableGraph& graph() const noexcept { return graph_; }
  std::size_t automorphism_order() const noexcept { return automorphisms_.size(); }

  DecoratedGraph canonical(std::vector<std::array<int, 2>> hpsi, std::vector<int> lpsi) const;

 private:
  StableGraph graph_;
  std::vector<HalfEdgeMap> automorphisms_;
};

/// One representative per isomorphism class of stable graphs of type (g,n)
/// with at most max_edges edges, in canonical form, sorted by canonical key
/// (hence by edge count first). Throws InvalidInput for unstable (g,n).
std::vector<StableGraph> enumerate_stable_graphs(int g, int n, int max_edges);

enum class Locus { smooth, rational_tails, compact_type, general };

std::string to_string(Locus locus);
Locus parse_locus(const std::string& name);

/// Most restrictive of smooth < rational_tails < compact_type < general.
Locus classify_locus(const StableGraph& graph, int g);

/// True when `graph` lies in `locus` (smooth ⊂ rational tails ⊂ compact type).
bool lies_in(const StableGraph& graph, int g, Locus locus);

struct TwoLoop {
  StableGraph graph;
  bool even;  // each vertex carries an even number of legs
};

/// Graphs with two vertices joined by exactly two edges and nothing else.
/// Unstable (g,n) gives an empty list.
std::vector<TwoLoop> two_loop_graphs(int g, int n);

/// Human-readable one-line rendering, e.g. "[g0{1,2} g2{} | 0-1 0-1]".
std::string describe(const StableGraph& g);
std::string describe(const DecoratedGraph& d);

}  // namespace verlinde
