#pragma once

#include <concepts>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cscal/symbolic/poly.hpp"

namespace cscal::sym {

using FactorId = std::uint32_t;

struct DenFactor {
  FactorId id;
  int exp;

  friend bool operator==(const DenFactor&, const DenFactor&) = default;
};

// An exact scalar expression, always held in canonical form:
//
//   numerator / (f1^e1 * ... * fk^ek)
//
// where the numerator is an expanded polynomial with rational coefficients over
// atoms (symbols, function applications and their derivatives, builtin
// applications), and each f is an interned primitive polynomial. Rewrites applied
// on construction: cos(a)^2 -> 1 - sin(a)^2, exp(a)*exp(b) -> exp(a+b),
// log(exp(a)) -> a, sqrt(a)^2 -> a.
//
// Values are immutable and cheap to copy.
class Expr {
 public:
  Expr() = default;  // zero
  template <std::integral T>
  Expr(T v) : Expr(Rational(static_cast<long>(v))) {}  // NOLINT(google-explicit-constructor)
  Expr(const Rational& v);                              // NOLINT(google-explicit-constructor)

  static Expr symbol(std::string_view name);
  // Undifferentiated application f(args...).
  static Expr function(std::string_view name, std::vector<Expr> args);
  // Partial derivative node: orders[i] derivatives with respect to argument slot i.
  static Expr derivative(std::string_view name, std::vector<Expr> args, std::vector<int> orders);
  static Expr from_atom(AtomId atom);
  // Builds numerator/denominator and normalizes. Factor ids must come from the registry.
  static Expr from_parts(Poly numerator, std::vector<DenFactor> denominator);

  const Poly& numerator() const;
  const std::vector<DenFactor>& denominator() const;

  // True iff the canonical numerator is empty. Exact for every expression.
  bool is_structural_zero() const { return node_ == nullptr; }
  bool is_rational() const;           // a rational constant (including zero)
  Rational rational_value() const;    // precondition is_rational()
  std::optional<AtomId> as_atom() const;  // exactly one atom with coefficient 1
  std::uint64_t hash() const;

  Expr operator-() const;
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  Expr& operator/=(const Expr& o);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);

  // Structural identity of canonical forms.
  friend bool identical(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend struct ExprAccess;
};

Expr pow(const Expr& base, int k);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);

// ------------------------------------------------------------------ atoms

enum class AtomKind : std::uint8_t { Symbol, Function, Sin, Cos, Exp, Log, Sqrt };

struct AtomInfo {
  AtomKind kind;
  std::string name;             // symbol or function name, builtin name otherwise
  std::vector<Expr> args;       // function arguments, or the single builtin argument
  std::vector<int> orders;      // function derivative orders per argument slot
  std::vector<AtomId> symbols;  // symbol atoms this atom depends on, sorted
  std::uint64_t serial;         // creation order
  std::uint64_t hash;
};

const AtomInfo& atom_info(AtomId id);
const Poly& factor_poly(FactorId id);
// Deterministic presentation order of atoms (symbols by creation, functions by name).
bool atom_less(AtomId a, AtomId b);

// ------------------------------------------------------------------ tree view

enum class NodeKind : std::uint8_t { Constant, Symbol, Function, Derivative, Builtin, Sum, Product, Power };

// Canonical tree presentation of an expression. Sum operands are monomial terms,
// Product operands are factors, Power operands are {base, integer exponent}.
NodeKind kind(const Expr& e);
std::vector<Expr> operands(const Expr& e);

// ------------------------------------------------------------------ operations

// Partial derivative with respect to a symbol atom.
Expr differentiate(const Expr& e, const Expr& symbol);

// Rebuilds the canonical form from its tree view. Idempotent.
Expr simplify(const Expr& e);

enum class ZeroStatus { Zero, NonZero, Undecided };
ZeroStatus zero_test(const Expr& e);
// Throws UndecidedError when the expression leaves the decidable class.
bool is_zero(const Expr& e);

struct FunctionBinding {
  std::vector<Expr> params;  // formal parameter symbols
  Expr body;
};

struct Substitution {
  std::map<std::string, Expr> symbols;
  std::map<std::string, FunctionBinding> functions;
};

// Simultaneous, capture-free substitution followed by canonicalization.
Expr substitute(const Expr& e, const Substitution& s);
Expr substitute(const Expr& e, const std::map<std::string, Expr>& symbols);

// Every atom reachable from e, including those inside atom arguments, in atom_less order.
std::vector<AtomId> free_atoms(const Expr& e);
std::set<std::string> free_functions(const Expr& e);
std::set<std::string> free_symbols(const Expr& e);

// Numeric value with every symbol bound. Function symbols must be substituted away
// first; unbound names raise UnboundSymbolError listing them.
long double evaluate(const Expr& e, const std::map<std::string, long double>& values);

std::string to_string(const Expr& e);

}  // namespace cscal::sym
