#include "verlinde/series.hpp"

#include "verlinde/error.hpp"

#include <numeric>

namespace verlinde {

namespace {

int total_degree(const Polynomial::Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

Rational coeff_or_zero(std::span<const Rational> s, int k) {
  return k >= 0 && k < static_cast<int>(s.size()) ? s[k] : Rational(0);
}

}  // namespace

Polynomial Polynomial::constant(int num_vars, const Rational& c) {
  Polynomial p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::univariate(int num_vars, int var, std::span<const Rational> coeffs,
                                  int max_degree) {
  Polynomial p(num_vars);
  Exponents e(num_vars, 0);
  for (int k = 0; k < static_cast<int>(coeffs.size()) && k <= max_degree; ++k) {
    e[var] = k;
    p.add_term(e, coeffs[k]);
  }
  return p;
}

Polynomial Polynomial::bivariate(int num_vars, int a, int b,
                                 const std::vector<std::vector<Rational>>& coeffs,
                                 int max_degree) {
  Polynomial p(num_vars);
  Exponents e(num_vars, 0);
  for (int i = 0; i < static_cast<int>(coeffs.size()); ++i)
    for (int j = 0; j < static_cast<int>(coeffs[i].size()); ++j) {
      if (i + j > max_degree) continue;
      e[a] = i;
      e[b] = j;
      p.add_term(e, coeffs[i][j]);
    }
  return p;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial Polynomial::multiply(const Polynomial& other, int max_degree) const {
  Polynomial out(num_vars_);
  Exponents e(num_vars_);
  for (const auto& [ea, ca] : terms_) {
    const int da = total_degree(ea);
    for (const auto& [eb, cb] : other.terms_) {
      if (da + total_degree(eb) > max_degree) continue;
      for (int i = 0; i < num_vars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

std::vector<Rational> series_product(std::span<const Rational> a, std::span<const Rational> b,
                                     int degree) {
  std::vector<Rational> out(degree + 1);
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j) out[i + j] += coeff_or_zero(a, i) * coeff_or_zero(b, j);
  return out;
}

std::vector<std::vector<Rational>> edge_quotient(std::span<const Rational> a,
                                                 std::span<const Rational> b, int degree) {
  auto numerator = [&](int i, int j) {
    Rational v = -(coeff_or_zero(a, i) * coeff_or_zero(b, j));
    if (i == 0 && j == 0) v += 1;
    return v;
  };
  if (numerator(0, 0) != 0)
    throw InvalidInput("edge numerator has a constant term; R is not symplectic");
  std::vector<std::vector<Rational>> q(degree + 1, std::vector<Rational>(degree + 1));
  // Homogeneous part of degree d of the numerator is (z + w) * Q_{d-1}.
  for (int d = 1; d <= degree + 1; ++d) {
    Rational prev = 0;
    for (int i = 0; i < d; ++i) {
      Rational qi = numerator(i, d - i) - prev;
      q[i][d - 1 - i] = qi;
      prev = qi;
    }
    if (prev != numerator(d, 0))
      throw InvalidInput("z + w does not divide the edge numerator; R is not symplectic");
  }
  return q;
}

}  // namespace verlinde
