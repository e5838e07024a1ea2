#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace cscal::sym {

using Rational = mpq_class;
using AtomId = std::uint32_t;

struct Power {
  AtomId atom;
  std::int32_t exp;

  friend bool operator==(const Power&, const Power&) = default;
};

// Product of atom powers, sorted by atom id, every exponent >= 1.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<Power> powers);
  static Monomial of(AtomId atom, int exp = 1);

  const std::vector<Power>& powers() const { return powers_; }
  bool empty() const { return powers_.empty(); }
  std::size_t size() const { return powers_.size(); }

  int degree_in(AtomId atom) const;
  int total_degree() const;
  bool divides(const Monomial& other) const;
  // Precondition: divides(other) holds for `divisor`.
  Monomial quotient(const Monomial& divisor) const;
  Monomial without(AtomId atom) const;
  Monomial with_power(AtomId atom, int exp) const;

  std::uint64_t hash() const;

  // Lexicographic order on exponent vectors, lower atom id more significant.
  // Returns <0, 0, >0.
  static int compare(const Monomial& a, const Monomial& b);

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Power> powers_;
};

// Greatest common divisor monomial.
Monomial gcd(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coef;
};

// Sparse multivariate polynomial over Q in independent atom indeterminates.
// Terms are kept in strictly decreasing monomial order with nonzero coefficients.
class Poly {
 public:
  Poly() = default;
  static Poly constant(const Rational& c);
  static Poly atom(AtomId atom, int exp = 1);
  static Poly term(Monomial mono, Rational coef);
  // Sorts, merges equal monomials and drops zero coefficients.
  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  bool is_constant() const;
  Rational constant_value() const;  // 0 if empty; precondition is_constant()
  const Term& lead() const { return terms_.front(); }

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Rational& c) const;
  Poly times(const Monomial& m, const Rational& c) const;
  Poly pow(int k) const;

  // Exact quotient when `d` divides this polynomial in Q[atoms], else nullopt.
  std::optional<Poly> divide_exact(const Poly& d) const;
  Poly divide_monomial(const Monomial& m) const;  // precondition: m divides every term

  Poly formal_derivative(AtomId atom) const;

  // Positive rational c such that this/c has coprime integer coefficients.
  Rational content() const;
  Monomial monomial_content() const;
  std::vector<AtomId> atoms() const;
  int max_degree(AtomId atom) const;
  int min_degree(AtomId atom) const;

  std::uint64_t hash() const;
  friend bool operator==(const Poly& a, const Poly& b);

 private:
  std::vector<Term> terms_;
};

}  // namespace cscal::sym
