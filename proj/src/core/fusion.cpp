#include "verlinde/fusion.hpp"

#include "verlinde/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>

namespace verlinde {

FusionDatum::FusionDatum(std::vector<std::string> names, std::vector<Label> dual,
                         Label unit, std::vector<int> three_point,
                         std::vector<Rational> weights, Rational anomaly)
    : names_(std::move(names)),
      dual_(std::move(dual)),
      unit_(unit),
      three_point_(std::move(three_point)),
      weights_(std::move(weights)),
      anomaly_(std::move(anomaly)) {
  validate();
}

std::optional<Label> FusionDatum::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<Label>(it - names_.begin());
}

void FusionDatum::validate() const {
  const int L = size();
  if (L == 0) throw InvariantViolation("nonempty", "label set is empty");
  if (static_cast<int>(dual_.size()) != L || static_cast<int>(weights_.size()) != L ||
      static_cast<int>(three_point_.size()) != L * L * L)
    throw InvariantViolation("shape", "table sizes do not match the label count");
  for (int a = 0; a < L; ++a)
    for (int b = a + 1; b < L; ++b)
      if (names_[a] == names_[b])
        throw InvariantViolation("distinct-labels", "duplicate label '" + names_[a] + "'");
  if (unit_ < 0 || unit_ >= L) throw InvariantViolation("unit", "unit label out of range");

  for (Label a = 0; a < L; ++a) {
    if (dual_[a] < 0 || dual_[a] >= L)
      throw InvariantViolation("duality", "dual of '" + names_[a] + "' out of range");
    if (dual_[dual_[a]] != a)
      throw InvariantViolation("duality", "dual is not an involution at '" + names_[a] + "'");
  }
  if (dual_[unit_] != unit_) throw InvariantViolation("duality", "unit is not self-dual");

  for (Label a = 0; a < L; ++a)
    for (Label b = 0; b < L; ++b)
      for (Label c = 0; c < L; ++c) {
        int v = n3(a, b, c);
        if (v < 0)
          throw InvariantViolation("nonnegativity", "negative three-point rank");
        if (v != n3(b, a, c) || v != n3(a, c, b) || v != n3(c, b, a))
          throw InvariantViolation("symmetry", "n3(" + names_[a] + "," + names_[b] + "," +
                                                   names_[c] + ") is not symmetric");
      }

  for (Label a = 0; a < L; ++a)
    for (Label b = 0; b < L; ++b)
      if (n3(a, b, unit_) != (b == dual_[a] ? 1 : 0))
        throw InvariantViolation("unit-pairing", "n3(" + names_[a] + "," + names_[b] +
                                                     ",unit) must equal the pairing");

  // (a.b).c = (a.c).b in terms of four-point ranks.
  for (Label a = 0; a < L; ++a)
    for (Label b = 0; b < L; ++b)
      for (Label c = 0; c < L; ++c)
        for (Label d = 0; d < L; ++d) {
          long lhs = 0, rhs = 0;
          for (Label v = 0; v < L; ++v) {
            lhs += long(n3(a, b, v)) * n3(dual_[v], c, d);
            rhs += long(n3(a, c, v)) * n3(dual_[v], b, d);
          }
          if (lhs != rhs)
            throw InvariantViolation("associativity", "fusion product is not associative at (" +
                                                          names_[a] + "," + names_[b] + "," +
                                                          names_[c] + "," + names_[d] + ")");
        }

  if (weights_[unit_] != 0) throw InvariantViolation("unit-weight", "weight(unit) must be 0");
  for (Label a = 0; a < L; ++a)
    if (weights_[a] != weights_[dual_[a]])
      throw InvariantViolation("dual-weight",
                               "weight of '" + names_[a] + "' differs from its dual");
}

FusionDatum builtin_sl2(int level) {
  if (level < 1) throw InvalidInput("sl2 level must be >= 1");
  const int L = level + 1;
  std::vector<std::string> names;
  std::vector<Label> dual;
  std::vector<Rational> weights;
  for (int a = 0; a < L; ++a) {
    names.push_back(std::to_string(a));
    dual.push_back(a);
    weights.emplace_back(Rational(a * (a + 2), 4 * (level + 2)));
    weights.back().canonicalize();
  }
  // Truncated Clebsch-Gordan rule.
  std::vector<int> n3(L * L * L, 0);
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b)
      for (int c = 0; c < L; ++c) {
        bool ok = (a + b + c) % 2 == 0 && std::abs(a - b) <= c &&
                  c <= std::min(a + b, 2 * level - a - b);
        n3[(a * L + b) * L + c] = ok ? 1 : 0;
      }
  Rational anomaly(3 * level, level + 2);
  anomaly.canonicalize();
  return FusionDatum(std::move(names), std::move(dual), 0, std::move(n3), std::move(weights),
                     anomaly);
}

FusionDatum builtin_slr_level1(int r) {
  if (r < 2) throw InvalidInput("slr1 rank must be >= 2");
  std::vector<std::string> names;
  std::vector<Label> dual;
  std::vector<Rational> weights;
  for (int i = 0; i < r; ++i) {
    names.push_back(std::to_string(i));
    dual.push_back((r - i) % r);
    weights.emplace_back(Rational(i * (r - i), 2 * r));
    weights.back().canonicalize();
  }
  std::vector<int> n3(r * r * r, 0);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) n3[(a * r + b) * r + c] = (a + b + c) % r == 0 ? 1 : 0;
  return FusionDatum(std::move(names), std::move(dual), 0, std::move(n3), std::move(weights),
                     Rational(r - 1));
}

namespace {

using nlohmann::json;

Label label_of(const std::vector<std::string>& names, const json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + ": expected a label string");
  auto s = j.get<std::string>();
  auto it = std::find(names.begin(), names.end(), s);
  if (it == names.end()) throw ParseError(std::string(what) + ": unknown label '" + s + "'");
  return static_cast<Label>(it - names.begin());
}

Rational rational_of(const json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + ": expected a \"num/den\" string");
  return parse_rational(j.get<std::string>());
}

}  // namespace

FusionDatum load_fusion_datum(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("fusion datum: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("fusion datum: top level must be an object");
  for (const char* field : {"labels", "dual", "unit", "n3", "weights", "anomaly"})
    if (!doc.contains(field))
      throw ParseError(std::string("fusion datum: missing field '") + field + "'");

  std::vector<std::string> names;
  if (!doc["labels"].is_array()) throw ParseError("fusion datum: 'labels' must be an array");
  for (const auto& l : doc["labels"]) {
    if (!l.is_string()) throw ParseError("fusion datum: labels must be strings");
    names.push_back(l.get<std::string>());
  }
  const int L = static_cast<int>(names.size());

  std::vector<Label> dual(L, -1);
  if (!doc["dual"].is_object()) throw ParseError("fusion datum: 'dual' must be an object");
  for (const auto& [k, v] : doc["dual"].items())
    dual[label_of(names, json(k), "dual")] = label_of(names, v, "dual");
  for (Label a = 0; a < L; ++a)
    if (dual[a] < 0) throw ParseError("fusion datum: no dual given for '" + names[a] + "'");

  Label unit = label_of(names, doc["unit"], "unit");

  // Each entry fixes the value on all orderings of its triple.
  std::vector<int> n3(L * L * L, 0);
  std::vector<bool> set(L * L * L, false);
  if (!doc["n3"].is_array()) throw ParseError("fusion datum: 'n3' must be an array");
  for (const auto& e : doc["n3"]) {
    if (!e.is_object() || !e.contains("a") || !e.contains("b") || !e.contains("c") ||
        !e.contains("value") || !e["value"].is_number_integer())
      throw ParseError("fusion datum: n3 entries need a, b, c and an integer value");
    std::array<Label, 3> t{label_of(names, e["a"], "n3"), label_of(names, e["b"], "n3"),
                           label_of(names, e["c"], "n3")};
    int value = e["value"].get<int>();
    std::sort(t.begin(), t.end());
    do {
      int idx = (t[0] * L + t[1]) * L + t[2];
      if (set[idx] && n3[idx] != value)
        throw InvariantViolation("symmetry", "conflicting n3 entries for (" + names[t[0]] +
                                                 "," + names[t[1]] + "," + names[t[2]] + ")");
      set[idx] = true;
      n3[idx] = value;
    } while (std::next_permutation(t.begin(), t.end()));
  }

  std::vector<Rational> weights(L);
  std::vector<bool> has_weight(L, false);
  if (!doc["weights"].is_object()) throw ParseError("fusion datum: 'weights' must be an object");
  for (const auto& [k, v] : doc["weights"].items()) {
    Label a = label_of(names, json(k), "weights");
    weights[a] = rational_of(v, "weights");
    has_weight[a] = true;
  }
  for (Label a = 0; a < L; ++a)
    if (!has_weight[a]) throw ParseError("fusion datum: no weight given for '" + names[a] + "'");

  Rational anomaly = rational_of(doc["anomaly"], "anomaly");
  return FusionDatum(std::move(names), std::move(dual), unit, std::move(n3), std::move(weights),
                     std::move(anomaly));
}

std::string dump_fusion_datum(const FusionDatum& datum) {
  nlohmann::ordered_json doc;
  doc["labels"] = datum.names();
  nlohmann::ordered_json dual = nlohmann::ordered_json::object();
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (Label a = 0; a < datum.size(); ++a) {
    dual[datum.name(a)] = datum.name(datum.dual(a));
    weights[datum.name(a)] = format_rational(datum.weight(a));
  }
  doc["dual"] = dual;
  doc["unit"] = datum.name(datum.unit());
  nlohmann::ordered_json n3 = nlohmann::ordered_json::array();
  for (Label a = 0; a < datum.size(); ++a)
    for (Label b = a; b < datum.size(); ++b)
      for (Label c = b; c < datum.size(); ++c)
        if (int v = datum.n3(a, b, c); v != 0)
          n3.push_back({{"a", datum.name(a)}, {"b", datum.name(b)}, {"c", datum.name(c)},
                        {"value", v}});
  doc["n3"] = n3;
  doc["weights"] = weights;
  doc["anomaly"] = format_rational(datum.anomaly());
  return doc.dump(2);
}

Rational anomaly_prefactor_exponent(const FusionDatum& datum) {
  return Rational(-datum.anomaly() / 2);
}

RankCalculator::RankCalculator(FusionDatum datum) : datum_(std::move(datum)) {}

Integer RankCalculator::rank(int g, std::span<const Label> labels) const {
  if (g < 0) throw InvalidInput("genus must be nonnegative");
  for (Label a : labels)
    if (a < 0 || a >= datum_.size()) throw InvalidInput("label out of range");
  return lookup(g, std::vector<Label>(labels.begin(), labels.end()));
}

Integer RankCalculator::lookup(int g, std::vector<Label> labels) const {
  std::sort(labels.begin(), labels.end());
  Key key{g, labels};
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  Integer value = compute(g, labels);
  std::lock_guard lock(mutex_);
  memo_.emplace(std::move(key), value);
  return value;
}

Integer RankCalculator::compute(int g, const std::vector<Label>& mu) const {
  const int L = datum_.size();
  const auto n = mu.size();
  if (g > 0) {
    // Non-separating gluing.
    Integer total = 0;
    for (Label v = 0; v < L; ++v) {
      auto next = mu;
      next.push_back(v);
      next.push_back(datum_.dual(v));
      total += lookup(g - 1, std::move(next));
    }
    return total;
  }
  switch (n) {
    case 0:
      return 1;
    case 1:
      return mu[0] == datum_.unit() ? 1 : 0;
    case 2:
      return mu[1] == datum_.dual(mu[0]) ? 1 : 0;
    case 3:
      return datum_.n3(mu[0], mu[1], mu[2]);
    default:
      break;
  }
  // Separating gluing: {mu_1, mu_2, v} and {v*, mu_3, ..., mu_n}.
  Integer total = 0;
  for (Label v = 0; v < L; ++v) {
    int left = datum_.n3(mu[0], mu[1], v);
    if (left == 0) continue;
    std::vector<Label> rest(mu.begin() + 2, mu.end());
    rest.push_back(datum_.dual(v));
    total += left * lookup(0, std::move(rest));
  }
  return total;
}

Integer rank(const FusionDatum& datum, int g, std::span<const Label> labels) {
  return RankCalculator(datum).rank(g, labels);
}

}  // namespace verlinde
