#pragma once

#include "verlinde/rational.hpp"

#include <map>
#include <span>
#include <vector>

namespace verlinde {

/// Sparse polynomial in a fixed number of commuting variables, truncated by
/// total degree on multiplication.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int num_vars) : num_vars_(num_vars) {}
  static Polynomial constant(int num_vars, const Rational& c);
  /// sum_k coeffs[k] * x_var^k, dropping k > max_degree.
  static Polynomial univariate(int num_vars, int var, std::span<const Rational> coeffs,
                               int max_degree);
  /// sum coeffs[i][j] * x_a^i * x_b^j with i + j <= max_degree.
  static Polynomial bivariate(int num_vars, int a, int b,
                              const std::vector<std::vector<Rational>>& coeffs, int max_degree);

  int num_vars() const noexcept { return num_vars_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<Exponents, Rational>& terms() const noexcept { return terms_; }

  void add_term(const Exponents& e, const Rational& c);
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  Polynomial multiply(const Polynomial& other, int max_degree) const;

 private:
  int num_vars_;
  std::map<Exponents, Rational> terms_;
};

/// Product of two truncated univariate series, truncated at `degree`.
std::vector<Rational> series_product(std::span<const Rational> a, std::span<const Rational> b,
                                     int degree);

/// Coefficients Q[i][j] of z^i w^j in (1 - A(z) B(w)) / (z + w), i + j <= degree.
/// Needs A, B through degree + 1. Throws InvalidInput if z + w does not divide
/// the numerator.
std::vector<std::vector<Rational>> edge_quotient(std::span<const Rational> a,
                                                 std::span<const Rational> b, int degree);

}  // namespace verlinde
