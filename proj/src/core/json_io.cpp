#include "verlinde/json_io.hpp"

#include "verlinde/error.hpp"

#include <sstream>

namespace verlinde {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

int int_of(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + ": expected an integer");
  return j.get<int>();
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    throw ParseError(std::string("missing field '") + name + "'");
  return j.at(name);
}

}  // namespace

ordered_json graph_to_json(const StableGraph& g) {
  ordered_json vertices = ordered_json::array();
  for (int v = 0; v < g.num_vertices(); ++v) {
    ordered_json legs = ordered_json::array();
    for (int i = 0; i < g.num_legs(); ++i)
      if (g.leg_vertex[i] == v) legs.push_back(i + 1);
    vertices.push_back({{"genus", g.genus[v]}, {"legs", legs}});
  }
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.edges) edges.push_back({e[0], e[1]});
  return {{"vertices", vertices}, {"edges", edges}};
}

StableGraph graph_from_json(const json& j) {
  StableGraph g;
  const json& vertices = field(j, "vertices");
  if (!vertices.is_array()) throw ParseError("'vertices' must be an array");
  std::vector<std::pair<int, int>> legs;  // (marking, vertex)
  for (const auto& v : vertices) {
    g.genus.push_back(int_of(field(v, "genus"), "genus"));
    const json& l = field(v, "legs");
    if (!l.is_array()) throw ParseError("'legs' must be an array");
    for (const auto& m : l) legs.emplace_back(int_of(m, "leg"), g.num_vertices() - 1);
  }
  g.leg_vertex.assign(legs.size(), -1);
  for (auto [m, v] : legs) {
    if (m < 1 || m > static_cast<int>(legs.size()) || g.leg_vertex[m - 1] != -1)
      throw ParseError("legs must be the markings 1..n, each exactly once");
    g.leg_vertex[m - 1] = v;
  }
  const json& edges = field(j, "edges");
  if (!edges.is_array()) throw ParseError("'edges' must be an array");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2) throw ParseError("edges are [v, w] pairs");
    g.edges.push_back({int_of(e[0], "edge"), int_of(e[1], "edge")});
  }
  g.validate();
  return g;
}

ordered_json decorated_to_json(const DecoratedGraph& d) {
  ordered_json j = graph_to_json(d.graph);
  ordered_json hpsi = ordered_json::array();
  for (const auto& h : d.hpsi) hpsi.push_back({h[0], h[1]});
  ordered_json lpsi = ordered_json::object();
  for (std::size_t i = 0; i < d.lpsi.size(); ++i)
    if (d.lpsi[i]) lpsi[std::to_string(i + 1)] = d.lpsi[i];
  j["hpsi"] = hpsi;
  j["lpsi"] = lpsi;
  return j;
}

namespace {

DecoratedGraph decoration_from(StableGraph graph, const json& holder) {
  DecoratedGraph d = DecoratedGraph::undecorated(std::move(graph));
  if (holder.contains("hpsi")) {
    const json& h = holder.at("hpsi");
    if (!h.is_array() || h.size() != d.hpsi.size())
      throw ParseError("'hpsi' must have one pair per edge");
    for (std::size_t e = 0; e < h.size(); ++e) {
      if (!h[e].is_array() || h[e].size() != 2) throw ParseError("'hpsi' entries are pairs");
      d.hpsi[e] = {int_of(h[e][0], "hpsi"), int_of(h[e][1], "hpsi")};
    }
  }
  if (holder.contains("lpsi")) {
    const json& l = holder.at("lpsi");
    if (!l.is_object()) throw ParseError("'lpsi' must be an object");
    for (const auto& [k, v] : l.items()) {
      int m = 0;
      try {
        m = std::stoi(k);
      } catch (const std::exception&) {
        throw ParseError("'lpsi' keys are marking numbers");
      }
      if (m < 1 || m > static_cast<int>(d.lpsi.size())) throw ParseError("'lpsi' marking out of range");
      d.lpsi[m - 1] = int_of(v, "lpsi");
    }
  }
  d.validate();
  return d;
}

}  // namespace

DecoratedGraph decorated_from_json(const json& j) { return decoration_from(graph_from_json(j), j); }

ordered_json taut_to_json(const TautClass& c) {
  ordered_json terms = ordered_json::array();
  for (const auto& [key, term] : c.terms()) {
    ordered_json d = decorated_to_json(term.graph);
    terms.push_back({{"lambda", term.lambda},
                     {"graph", graph_to_json(term.graph.graph)},
                     {"hpsi", d["hpsi"]},
                     {"lpsi", d["lpsi"]},
                     {"coeff", format_rational(term.coeff)}});
  }
  return {{"g", c.genus()}, {"n", c.markings()}, {"truncation", c.truncation()}, {"terms", terms}};
}

TautClass taut_from_json(const json& j) {
  TautClass c(int_of(field(j, "g"), "g"), int_of(field(j, "n"), "n"),
              int_of(field(j, "truncation"), "truncation"));
  const json& terms = field(j, "terms");
  if (!terms.is_array()) throw ParseError("'terms' must be an array");
  for (const auto& t : terms) {
    DecoratedGraph d = decoration_from(graph_from_json(field(t, "graph")), t);
    const json& coeff = field(t, "coeff");
    if (!coeff.is_string()) throw ParseError("'coeff' must be a \"num/den\" string");
    c.add_term(int_of(field(t, "lambda"), "lambda"), d, parse_rational(coeff.get<std::string>()));
  }
  return c;
}

std::string taut_to_text(const TautClass& c) {
  std::ostringstream os;
  os << "# ch on Mbar_{" << c.genus() << "," << c.markings() << "} through degree "
     << c.truncation() << ", " << c.size() << " terms\n";
  for (const auto& [key, term] : c.terms()) {
    os << "deg " << key.degree << "  " << format_rational(term.coeff);
    if (term.lambda) os << "  lambda1^" << term.lambda;
    os << "  " << describe(term.graph) << '\n';
  }
  return os.str();
}

}  // namespace verlinde
