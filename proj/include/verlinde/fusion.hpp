#pragma once

#include "verlinde/rational.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace verlinde {

/// Index into FusionDatum::names().
using Label = int;

/// A based Frobenius algebra: level-l representations of a simple Lie
/// algebra with duality, unit, genus-0 three-point ranks, conformal weights
/// and the conformal anomaly.
///
/// Immutable once constructed. The constructor checks every axiom and throws
/// InvariantViolation naming the first one that fails.
class FusionDatum {
 public:
  FusionDatum(std::vector<std::string> names, std::vector<Label> dual, Label unit,
              std::vector<int> three_point, std::vector<Rational> weights,
              Rational anomaly);

  int size() const noexcept { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(Label a) const { return names_.at(a); }
  std::optional<Label> find(std::string_view name) const;

  Label dual(Label a) const { return dual_.at(a); }
  Label unit() const noexcept { return unit_; }
  int n3(Label a, Label b, Label c) const {
    return three_point_[(a * size() + b) * size() + c];
  }
  const Rational& weight(Label a) const { return weights_.at(a); }
  const Rational& anomaly() const noexcept { return anomaly_; }

  bool operator==(const FusionDatum&) const = default;

 private:
  void validate() const;

  std::vector<std::string> names_;
  std::vector<Label> dual_;
  Label unit_;
  std::vector<int> three_point_;
  std::vector<Rational> weights_;
  Rational anomaly_;
};

/// sl_2 at level `level`: labels are box counts 0..level.
FusionDatum builtin_sl2(int level);

/// sl_r at level 1: labels are column heights 0..r-1.
FusionDatum builtin_slr_level1(int r);

/// Parses the JSON fusion-datum format and validates it.
FusionDatum load_fusion_datum(std::string_view json_text);
std::string dump_fusion_datum(const FusionDatum& datum);

/// Exponent a in the exp(a * lambda_1) prefactor: -anomaly / 2.
Rational anomaly_prefactor_exponent(const FusionDatum& datum);

/// Verlinde ranks d_g(mu_1..mu_n) by the gluing recursion, memoized on
/// (g, sorted labels). Safe to share between threads.
class RankCalculator {
 public:
  explicit RankCalculator(FusionDatum datum);

  const FusionDatum& datum() const noexcept { return datum_; }

  /// Accepts any g >= 0 and any n; (0,0), (0,1), (0,2) use the degenerate
  /// base cases.
  Integer rank(int g, std::span<const Label> labels) const;

 private:
  using Key = std::pair<int, std::vector<Label>>;

  Integer compute(int g, const std::vector<Label>& sorted) const;
  Integer lookup(int g, std::vector<Label> labels) const;

  FusionDatum datum_;
  mutable std::mutex mutex_;
  mutable std::map<Key, Integer> memo_;
};

/// Convenience wrapper with a fresh memo table.
Integer rank(const FusionDatum& datum, int g, std::span<const Label> labels);

}  // namespace verlinde
