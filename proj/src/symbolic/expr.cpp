#include "cscal/symbolic/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <unordered_map>

#include "cscal/error.hpp"

namespace cscal::sym {

struct Expr::Node {
  Poly num;
  std::vector<DenFactor> den;  // sorted by id, exponents >= 1
  std::uint64_t hash = 0;
};

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t string_hash(std::string_view s) { return std::hash<std::string_view>{}(s); }

// Append-only storage with stable element addresses; readers need no lock.
template <class T>
class ChunkedStore {
 public:
  ChunkedStore() { chunks_.reserve(1u << 16); }

  std::uint32_t push(T value) {
    if ((size_ & kMask) == 0) chunks_.push_back(std::make_unique<T[]>(kChunk));
    chunks_[size_ >> kBits][size_ & kMask] = std::move(value);
    return static_cast<std::uint32_t>(size_++);
  }
  T& at(std::uint32_t i) { return chunks_[i >> kBits][i & kMask]; }
  const T& operator[](std::uint32_t i) const { return chunks_[i >> kBits][i & kMask]; }
  std::size_t size() const { return size_; }

 private:
  static constexpr std::size_t kBits = 10;
  static constexpr std::size_t kChunk = std::size_t{1} << kBits;
  static constexpr std::size_t kMask = kChunk - 1;
  std::vector<std::unique_ptr<T[]>> chunks_;
  std::size_t size_ = 0;
};

struct Registry {
  std::mutex mu;
  ChunkedStore<AtomInfo> atoms;
  std::unordered_multimap<std::uint64_t, AtomId> atom_index;
  ChunkedStore<Poly> factors;
  std::unordered_multimap<std::uint64_t, FactorId> factor_index;
  std::unordered_map<std::uint64_t, Expr> derivative_cache;
  std::uint64_t serial = 0;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

struct ExprAccess {
  static const Expr::Node* node(const Expr& e) { return e.node_.get(); }

  // Builds a node without cancellation or reduction.
  static Expr raw(Poly num, std::vector<DenFactor> den) {
    if (num.empty()) return Expr{};
    auto n = std::make_shared<Expr::Node>();
    std::uint64_t h = num.hash();
    for (const auto& d : den) h = mix(mix(h, d.id + 0x100000000ULL), static_cast<std::uint64_t>(d.exp));
    n->num = std::move(num);
    n->den = std::move(den);
    n->hash = h;
    return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
  }
};

namespace {

const Poly kEmptyPoly{};
const std::vector<DenFactor> kNoDen{};

const AtomInfo& info(AtomId id) { return registry().atoms[id]; }

bool same_args(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!identical(a[i], b[i])) return false;
  }
  return true;
}

void collect_atoms(const Expr& e, std::vector<AtomId>& out) {
  for (auto a : e.numerator().atoms()) out.push_back(a);
  for (const auto& d : e.denominator()) {
    for (auto a : factor_poly(d.id).atoms()) out.push_back(a);
  }
}

std::vector<AtomId> top_atoms(const Expr& e) {
  std::vector<AtomId> out;
  collect_atoms(e, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AtomId intern_atom(AtomKind kind, std::string name, std::vector<Expr> args, std::vector<int> orders) {
  std::uint64_t h = mix(static_cast<std::uint64_t>(kind) + 17, string_hash(name));
  for (const auto& a : args) h = mix(h, a.hash());
  for (int o : orders) h = mix(h, static_cast<std::uint64_t>(o) + 3);

  std::vector<AtomId> symbols;
  for (const auto& a : args) {
    for (auto id : top_atoms(a)) {
      const auto& s = info(id).symbols;
      symbols.insert(symbols.end(), s.begin(), s.end());
    }
  }
  std::sort(symbols.begin(), symbols.end());
  symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());

  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  auto range = reg.atom_index.equal_range(h);
  for (auto it = range.first; it != range.second; ++it) {
    const auto& cand = reg.atoms[it->second];
    if (cand.kind == kind && cand.name == name && cand.orders == orders && same_args(cand.args, args)) {
      return it->second;
    }
  }
  AtomInfo ai;
  ai.kind = kind;
  ai.name = std::move(name);
  ai.args = std::move(args);
  ai.orders = std::move(orders);
  ai.symbols = std::move(symbols);
  ai.serial = reg.serial++;
  ai.hash = h;
  AtomId id = reg.atoms.push(std::move(ai));
  if (kind == AtomKind::Symbol) reg.atoms.at(id).symbols = {id};
  reg.atom_index.emplace(h, id);
  return id;
}

// Precondition: p is primitive with positive leading coefficient.
FactorId intern_factor(const Poly& p) {
  const std::uint64_t h = p.hash();
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  auto range = reg.factor_index.equal_range(h);
  for (auto it = range.first; it != range.second; ++it) {
    if (reg.factors[it->second] == p) return it->second;
  }
  FactorId id = reg.factors.push(p);
  reg.factor_index.emplace(h, id);
  return id;
}

std::size_t factor_count() {
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  return reg.factors.size();
}

Expr poly_expr(Poly p) { return ExprAccess::raw(std::move(p), {}); }

void sort_merge(std::vector<DenFactor>& den) {
  std::sort(den.begin(), den.end(), [](const DenFactor& a, const DenFactor& b) { return a.id < b.id; });
  std::vector<DenFactor> out;
  for (const auto& d : den) {
    if (!out.empty() && out.back().id == d.id) {
      out.back().exp += d.exp;
    } else {
      out.push_back(d);
    }
  }
  std::erase_if(out, [](const DenFactor& d) { return d.exp <= 0; });
  den = std::move(out);
}

// q for an atom exp(m/q) with m a monomial, 1 otherwise.
long exp_root(AtomId a) {
  const Expr& arg = info(a).args[0];
  if (!arg.denominator().empty() || arg.numerator().size() != 1) return 1;
  const Rational& c = arg.numerator().lead().coef;
  if (c.get_num() != 1 || !c.get_den().fits_slong_p()) return 1;
  return c.get_den().get_si();
}

// exp(m/q)^k in a denominator becomes exp(m)^(k/q) exp(m/q)^(k%q).
void reduce_exp_roots(std::vector<DenFactor>& den) {
  bool changed = false;
  const std::size_t n = den.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Poly& f = factor_poly(den[i].id);
    if (f.size() != 1 || f.lead().mono.size() != 1 || f.lead().mono.powers()[0].exp != 1) continue;
    const AtomId a = f.lead().mono.powers()[0].atom;
    if (info(a).kind != AtomKind::Exp) continue;
    const long q = exp_root(a);
    if (q < 2 || den[i].exp < q) continue;
    const Expr whole = exp(Expr(q) * info(a).args[0]);
    den.push_back({intern_factor(whole.numerator()), static_cast<int>(den[i].exp / q)});
    den[i].exp %= q;
    changed = true;
  }
  if (changed) sort_merge(den);
}

void cancel(Poly& num, std::vector<DenFactor>& den) {
  if (num.empty()) {
    den.clear();
    return;
  }
  reduce_exp_roots(den);
  for (auto& d : den) {
    const Poly& f = factor_poly(d.id);
    while (d.exp > 0) {
      auto q = num.divide_exact(f);
      if (!q) break;
      num = std::move(*q);
      --d.exp;
    }
    // The numerator holds cos(a)^2 as 1 - sin(a)^2, so a cos(a)^k denominator
    // needs that form as a divisor too.
    if (d.exp >= 2 && f.size() == 1 && f.lead().mono.size() == 1 && f.lead().mono.powers()[0].exp == 1) {
      const auto& ai = info(f.lead().mono.powers()[0].atom);
      if (ai.kind != AtomKind::Cos) continue;
      const Poly s = sin(ai.args[0]).numerator();
      const Poly c2 = Poly::constant(1) - s * s;
      while (d.exp >= 2) {
        auto q = num.divide_exact(c2);
        if (!q) break;
        num = std::move(*q);
        d.exp -= 2;
      }
    }
  }
  std::erase_if(den, [](const DenFactor& d) { return d.exp == 0; });
}

Expr normalize(Poly num, std::vector<DenFactor> den) {
  cancel(num, den);
  return ExprAccess::raw(std::move(num), std::move(den));
}

Poly factor_product(const std::vector<DenFactor>& den) {
  Poly p = Poly::constant(1);
  for (const auto& d : den) p = p * factor_poly(d.id).pow(d.exp);
  return p;
}

bool term_reducible(const Term& t) {
  for (const auto& pw : t.mono.powers()) {
    switch (info(pw.atom).kind) {
      case AtomKind::Cos:
      case AtomKind::Sqrt:
        if (pw.exp >= 2) return true;
        break;
      case AtomKind::Exp:
        if (pw.exp >= exp_root(pw.atom) && exp_root(pw.atom) > 1) return true;
        break;
      default:
        break;
    }
  }
  return false;
}

Expr reduce(const Poly& p) {
  std::vector<Term> plain;
  Expr acc;
  for (const auto& t : p.terms()) {
    if (!term_reducible(t)) {
      plain.push_back(t);
      continue;
    }
    std::vector<Power> keep;
    Expr factor(t.coef);
    for (const auto& pw : t.mono.powers()) {
      const auto& ai = info(pw.atom);
      if (ai.kind == AtomKind::Cos && pw.exp >= 2) {
        if (pw.exp % 2) keep.push_back({pw.atom, 1});
        factor *= pow(Expr(1) - pow(sin(ai.args[0]), 2), pw.exp / 2);
      } else if (ai.kind == AtomKind::Sqrt && pw.exp >= 2) {
        if (pw.exp % 2) keep.push_back({pw.atom, 1});
        factor *= pow(ai.args[0], pw.exp / 2);
      } else if (ai.kind == AtomKind::Exp && exp_root(pw.atom) > 1) {
        // exp(m/q)^k = exp(m)^(k/q) exp(m/q)^(k%q)
        const long q = exp_root(pw.atom);
        if (pw.exp % q) keep.push_back({pw.atom, static_cast<int>(pw.exp % q)});
        factor *= pow(exp(Expr(q) * ai.args[0]), static_cast<int>(pw.exp / q));
      } else {
        keep.push_back(pw);
      }
    }
    acc += poly_expr(Poly::term(Monomial(std::move(keep)), Rational(1))) * factor;
  }
  return poly_expr(Poly::from_terms(std::move(plain))) + acc;
}

bool needs_reduction(const Poly& p) {
  return std::any_of(p.terms().begin(), p.terms().end(), term_reducible);
}

Expr with_reduction(Poly num, std::vector<DenFactor> den) {
  if (!needs_reduction(num)) return normalize(std::move(num), std::move(den));
  Expr r = reduce(num);
  if (r.is_structural_zero()) return r;
  Poly n = r.numerator();
  std::vector<DenFactor> d = r.denominator();
  d.insert(d.end(), den.begin(), den.end());
  sort_merge(d);
  return normalize(std::move(n), std::move(d));
}

struct ContentSplit {
  Rational c;
  Monomial m;
  Poly rest;  // primitive, positive leading coefficient, no monomial content
};

ContentSplit split_content(const Poly& p) {
  ContentSplit s;
  s.c = p.content();
  if (p.lead().coef < 0) s.c = -s.c;
  s.m = p.monomial_content();
  s.rest = p.divide_monomial(s.m).scaled(Rational(1) / s.c);
  return s;
}

// Splits a primitive polynomial into known registry factors where possible.
void split_factor(Poly p, const std::vector<DenFactor>& hints, std::vector<DenFactor>& den, Rational& scale) {
  auto try_factor = [&](FactorId id) {
    const Poly& f = factor_poly(id);
    if (f.size() < 2 || f.size() > p.size() || f == p) return;
    while (p.size() >= f.size() && f.lead().mono.divides(p.lead().mono)) {
      auto q = p.divide_exact(f);
      if (!q) break;
      p = std::move(*q);
      den.push_back({id, 1});
      if (p.is_constant()) break;
    }
  };
  for (const auto& h : hints) {
    if (p.is_constant()) break;
    try_factor(h.id);
  }
  const std::size_t n = factor_count();
  for (FactorId id = 0; id < n && !p.is_constant(); ++id) try_factor(id);
  if (p.is_constant()) {
    scale /= p.constant_value();
    return;
  }
  // Quotients of primitive polynomials are primitive up to sign and unit.
  Rational c = p.content();
  if (p.lead().coef < 0) c = -c;
  if (c != 1) {
    p = p.scaled(Rational(1) / c);
    scale /= c;
  }
  den.push_back({intern_factor(p), 1});
}

Expr inverse(const Expr& b, const std::vector<DenFactor>& hints) {
  if (b.is_structural_zero()) throw DivisionByZero();
  const ContentSplit s = split_content(b.numerator());
  Rational scale = Rational(1) / s.c;
  std::vector<DenFactor> den;
  Expr extra(1);
  bool has_extra = false;
  for (const auto& pw : s.m.powers()) {
    const auto& ai = info(pw.atom);
    if (ai.kind == AtomKind::Sqrt) {
      // 1/sqrt(a)^k = sqrt(a)^k / a^k
      extra *= pow(Expr::from_atom(pw.atom), pw.exp) / pow(ai.args[0], pw.exp);
      has_extra = true;
    } else {
      den.push_back({intern_factor(Poly::atom(pw.atom)), pw.exp});
    }
  }
  if (!s.rest.is_constant()) split_factor(s.rest, hints, den, scale);
  sort_merge(den);
  Expr r = normalize(factor_product(b.denominator()).scaled(scale), std::move(den));
  return has_extra ? r * extra : r;
}

// Largest s with s^2 | n (trial division by small primes plus a final perfect-square test).
std::pair<mpz_class, mpz_class> split_square(mpz_class n) {
  mpz_class outside = 1;
  for (unsigned long p = 2; p < 1000 && n > 1; ++p) {
    const mpz_class pp = p * p;
    while (mpz_divisible_p(n.get_mpz_t(), pp.get_mpz_t())) {
      n /= pp;
      outside *= p;
    }
  }
  if (n > 1 && mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    outside *= r;
    n = 1;
  }
  return {outside, n};
}

Expr builtin_atom(AtomKind kind, const char* name, Expr arg) {
  return Expr::from_atom(intern_atom(kind, name, {std::move(arg)}, {}));
}

bool leading_negative(const Expr& e) { return !e.is_structural_zero() && e.numerator().lead().coef < 0; }

bool depends_on(AtomId atom, AtomId symbol) {
  const auto& s = info(atom).symbols;
  return std::binary_search(s.begin(), s.end(), symbol);
}

Expr diff_impl(const Expr& e, AtomId sym);

Expr atom_derivative(AtomId a, AtomId sym) {
  const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | sym;
  auto& reg = registry();
  {
    std::lock_guard lock(reg.mu);
    auto it = reg.derivative_cache.find(key);
    if (it != reg.derivative_cache.end()) return it->second;
  }
  const AtomInfo& ai = info(a);
  Expr d;
  switch (ai.kind) {
    case AtomKind::Symbol:
      d = (a == sym) ? Expr(1) : Expr();
      break;
    case AtomKind::Function:
      for (std::size_t i = 0; i < ai.args.size(); ++i) {
        Expr da = diff_impl(ai.args[i], sym);
        if (da.is_structural_zero()) continue;
        std::vector<int> orders = ai.orders;
        ++orders[i];
        d += Expr::derivative(ai.name, ai.args, std::move(orders)) * da;
      }
      break;
    case AtomKind::Sin:
      d = cos(ai.args[0]) * diff_impl(ai.args[0], sym);
      break;
    case AtomKind::Cos:
      d = -(sin(ai.args[0]) * diff_impl(ai.args[0], sym));
      break;
    case AtomKind::Exp:
      d = Expr::from_atom(a) * diff_impl(ai.args[0], sym);
      break;
    case AtomKind::Log:
      d = diff_impl(ai.args[0], sym) / ai.args[0];
      break;
    case AtomKind::Sqrt:
      d = diff_impl(ai.args[0], sym) / (Expr(2) * Expr::from_atom(a));
      break;
  }
  std::lock_guard lock(reg.mu);
  reg.derivative_cache.emplace(key, d);
  return d;
}

Expr poly_derivative(const Poly& p, AtomId sym) {
  Expr d;
  for (auto a : p.atoms()) {
    if (!depends_on(a, sym)) continue;
    Expr da = atom_derivative(a, sym);
    if (da.is_structural_zero()) continue;
    d += poly_expr(p.formal_derivative(a)) * da;
  }
  return d;
}

Expr diff_impl(const Expr& e, AtomId sym) {
  if (e.is_structural_zero()) return e;
  bool dependent = false;
  for (auto a : top_atoms(e)) {
    if (depends_on(a, sym)) {
      dependent = true;
      break;
    }
  }
  if (!dependent) return Expr();
  Expr dn = poly_derivative(e.numerator(), sym);
  if (e.denominator().empty()) return dn;
  Expr s;
  for (const auto& d : e.denominator()) {
    Expr df = poly_derivative(factor_poly(d.id), sym);
    if (df.is_structural_zero()) continue;
    s += Expr(d.exp) * df * ExprAccess::raw(Poly::constant(1), {{d.id, 1}});
  }
  return dn * ExprAccess::raw(Poly::constant(1), e.denominator()) - e * s;
}

int kind_rank(AtomKind k) { return static_cast<int>(k); }

}  // namespace

// ------------------------------------------------------------------ Expr basics

Expr::Expr(const Rational& v) : Expr(ExprAccess::raw(Poly::constant(v), {})) {}

Expr Expr::symbol(std::string_view name) {
  return from_atom(intern_atom(AtomKind::Symbol, std::string(name), {}, {}));
}

Expr Expr::function(std::string_view name, std::vector<Expr> args) {
  std::vector<int> orders(args.size(), 0);
  return derivative(name, std::move(args), std::move(orders));
}

Expr Expr::derivative(std::string_view name, std::vector<Expr> args, std::vector<int> orders) {
  if (orders.size() != args.size()) throw std::invalid_argument("derivative: orders/args size mismatch");
  return from_atom(intern_atom(AtomKind::Function, std::string(name), std::move(args), std::move(orders)));
}

Expr Expr::from_atom(AtomId atom) { return ExprAccess::raw(Poly::atom(atom), {}); }

Expr Expr::from_parts(Poly numerator, std::vector<DenFactor> denominator) {
  sort_merge(denominator);
  return with_reduction(std::move(numerator), std::move(denominator));
}

const Poly& Expr::numerator() const { return node_ ? node_->num : kEmptyPoly; }
const std::vector<DenFactor>& Expr::denominator() const { return node_ ? node_->den : kNoDen; }

bool Expr::is_rational() const { return !node_ || (node_->den.empty() && node_->num.is_constant()); }

Rational Expr::rational_value() const { return node_ ? node_->num.constant_value() : Rational(0); }

std::optional<AtomId> Expr::as_atom() const {
  if (!node_ || !node_->den.empty() || node_->num.size() != 1) return std::nullopt;
  const auto& t = node_->num.lead();
  if (t.coef != 1 || t.mono.size() != 1 || t.mono.powers()[0].exp != 1) return std::nullopt;
  return t.mono.powers()[0].atom;
}

std::uint64_t Expr::hash() const { return node_ ? node_->hash : 0; }

bool identical(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->hash == b.node_->hash && a.node_->den == b.node_->den && a.node_->num == b.node_->num;
}

Expr Expr::operator-() const {
  if (!node_) return *this;
  return ExprAccess::raw(-node_->num, node_->den);
}

Expr& Expr::operator+=(const Expr& o) { return *this = *this + o; }
Expr& Expr::operator-=(const Expr& o) { return *this = *this - o; }
Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }
Expr& Expr::operator/=(const Expr& o) { return *this = *this / o; }

Expr operator+(const Expr& a, const Expr& b) {
  if (!a.node_) return b;
  if (!b.node_) return a;
  const auto& A = *a.node_;
  const auto& B = *b.node_;
  if (A.den == B.den) return normalize(A.num + B.num, A.den);
  std::vector<DenFactor> lcm, mult_a, mult_b;
  std::size_t i = 0, j = 0;
  while (i < A.den.size() || j < B.den.size()) {
    if (j == B.den.size() || (i < A.den.size() && A.den[i].id < B.den[j].id)) {
      lcm.push_back(A.den[i]);
      mult_b.push_back(A.den[i]);
      ++i;
    } else if (i == A.den.size() || B.den[j].id < A.den[i].id) {
      lcm.push_back(B.den[j]);
      mult_a.push_back(B.den[j]);
      ++j;
    } else {
      const int ea = A.den[i].exp, eb = B.den[j].exp;
      lcm.push_back({A.den[i].id, std::max(ea, eb)});
      if (eb > ea) mult_a.push_back({A.den[i].id, eb - ea});
      if (ea > eb) mult_b.push_back({A.den[i].id, ea - eb});
      ++i;
      ++j;
    }
  }
  Poly na = mult_a.empty() ? A.num : A.num * factor_product(mult_a);
  Poly nb = mult_b.empty() ? B.num : B.num * factor_product(mult_b);
  return normalize(na + nb, std::move(lcm));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (!a.node_ || !b.node_) return Expr{};
  const auto& A = *a.node_;
  const auto& B = *b.node_;
  if (A.den.empty() && B.den.empty()) return with_reduction(A.num * B.num, {});
  Poly na = A.num;
  Poly nb = B.num;
  std::vector<DenFactor> da = A.den;
  std::vector<DenFactor> db = B.den;
  cancel(na, db);
  cancel(nb, da);
  std::vector<DenFactor> den = std::move(da);
  den.insert(den.end(), db.begin(), db.end());
  sort_merge(den);
  return with_reduction(na * nb, std::move(den));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_structural_zero()) throw DivisionByZero();
  if (!a.node_) return a;
  if (b.is_rational()) return a * Expr(Rational(1) / b.rational_value());
  std::vector<DenFactor> hints = a.denominator();
  hints.insert(hints.end(), b.denominator().begin(), b.denominator().end());
  return a * inverse(b, hints);
}

Expr pow(const Expr& base, int k) {
  if (k == 0) return Expr(1);
  if (k < 0) return pow(inverse(base, base.denominator()), -k);
  Expr result(1);
  Expr b = base;
  while (k) {
    if (k & 1) result *= b;
    k >>= 1;
    if (k) b *= b;
  }
  return result;
}

// ------------------------------------------------------------------ builtins

Expr sin(const Expr& e) {
  if (e.is_structural_zero()) return e;
  if (leading_negative(e)) return -builtin_atom(AtomKind::Sin, "sin", -e);
  return builtin_atom(AtomKind::Sin, "sin", e);
}

Expr cos(const Expr& e) {
  if (e.is_structural_zero()) return Expr(1);
  if (leading_negative(e)) return builtin_atom(AtomKind::Cos, "cos", -e);
  return builtin_atom(AtomKind::Cos, "cos", e);
}

// A polynomial argument splits term by term, exp(p/q m) = exp(m/q)^p, so that
// products of exponentials stay polynomials in independent exp atoms.
Expr exp(const Expr& e) {
  if (e.is_structural_zero()) return Expr(1);
  if (!e.denominator().empty()) return builtin_atom(AtomKind::Exp, "exp", e);
  Expr out(1);
  for (const auto& t : e.numerator().terms()) {
    const auto& pw = t.mono.powers();
    const bool small = t.coef.get_num().fits_sint_p();
    const int k = small ? static_cast<int>(t.coef.get_num().get_si()) : 0;
    // exp(n*log(a)) = a^n
    if (pw.size() == 1 && pw[0].exp == 1 && info(pw[0].atom).kind == AtomKind::Log && t.coef.get_den() == 1 && small) {
      out *= pow(info(pw[0].atom).args[0], k);
    } else if (!small) {
      out *= builtin_atom(AtomKind::Exp, "exp", poly_expr(Poly::term(t.mono, t.coef)));
    } else {
      const Rational unit(mpz_class(1), t.coef.get_den());
      out *= pow(builtin_atom(AtomKind::Exp, "exp", poly_expr(Poly::term(t.mono, unit))), k);
    }
  }
  return out;
}

Expr log(const Expr& e) {
  if (e.is_structural_zero()) throw MathError("log(0)");
  if (e.is_rational() && e.rational_value() == 1) return Expr();
  // log of a product of exponentials
  if (e.denominator().empty() && e.numerator().size() == 1) {
    const auto& t = e.numerator().lead();
    const auto& pw = t.mono.powers();
    if (t.coef == 1 && !pw.empty() &&
        std::all_of(pw.begin(), pw.end(), [](const Power& p) { return info(p.atom).kind == AtomKind::Exp; })) {
      Expr sum;
      for (const auto& p : pw) sum += Expr(p.exp) * info(p.atom).args[0];
      return sum;
    }
  }
  return builtin_atom(AtomKind::Log, "log", e);
}

Expr sqrt(const Expr& e) {
  if (e.is_structural_zero()) return e;
  const ContentSplit s = split_content(e.numerator());
  // Constant part: sqrt(p/q) = (sp/sq) * sqrt(rp*rq)/rq
  Rational c = s.c;
  const bool negative = c < 0;
  if (negative) c = -c;
  auto [sp, rp] = split_square(c.get_num());
  auto [sq, rq] = split_square(c.get_den());
  Expr outside(Rational(sp, sq * rq));
  Poly inside = s.rest.scaled(Rational(rp * rq));
  if (negative) inside = -inside;
  std::vector<Power> inside_mono;
  for (const auto& pw : s.m.powers()) {
    const auto& ai = info(pw.atom);
    if (ai.kind == AtomKind::Exp) {
      outside *= exp(ai.args[0] * Expr(Rational(pw.exp, 2)));
      continue;
    }
    if (pw.exp / 2) outside *= pow(Expr::from_atom(pw.atom), pw.exp / 2);
    if (pw.exp % 2) inside_mono.push_back({pw.atom, 1});
  }
  inside = inside.times(Monomial(std::move(inside_mono)), Rational(1));
  for (const auto& d : e.denominator()) {
    const Expr f = poly_expr(factor_poly(d.id));
    outside /= pow(f, (d.exp + 1) / 2);
    // sqrt(N/f) = sqrt(N*f)/f
    if (d.exp % 2) inside = inside * factor_poly(d.id);
  }
  if (inside.is_constant() && inside.constant_value() == 1) return outside;
  return outside * builtin_atom(AtomKind::Sqrt, "sqrt", with_reduction(std::move(inside), {}));
}

// ------------------------------------------------------------------ registry access

const AtomInfo& atom_info(AtomId id) { return info(id); }

const Poly& factor_poly(FactorId id) { return registry().factors[id]; }

bool atom_less(AtomId a, AtomId b) {
  if (a == b) return false;
  const auto& x = info(a);
  const auto& y = info(b);
  if (x.kind != y.kind) return kind_rank(x.kind) < kind_rank(y.kind);
  if (x.kind == AtomKind::Symbol) return x.serial < y.serial;
  if (x.name != y.name) return x.name < y.name;
  if (x.args.size() != y.args.size()) return x.args.size() < y.args.size();
  int ox = 0, oy = 0;
  for (int o : x.orders) ox += o;
  for (int o : y.orders) oy += o;
  if (ox != oy) return ox < oy;
  if (x.orders != y.orders) return x.orders > y.orders;
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    const std::string sx = to_string(x.args[i]);
    const std::string sy = to_string(y.args[i]);
    if (sx != sy) return sx < sy;
  }
  return x.serial < y.serial;
}

// ------------------------------------------------------------------ tree view

NodeKind kind(const Expr& e) {
  if (e.is_rational()) return NodeKind::Constant;
  const auto& num = e.numerator();
  const auto& den = e.denominator();
  if (den.empty()) {
    if (num.size() > 1) return NodeKind::Sum;
    const auto& t = num.lead();
    if (t.coef == 1 && t.mono.size() == 1) {
      const auto& pw = t.mono.powers()[0];
      if (pw.exp > 1) return NodeKind::Power;
      const auto& ai = info(pw.atom);
      switch (ai.kind) {
        case AtomKind::Symbol:
          return NodeKind::Symbol;
        case AtomKind::Function:
          return std::all_of(ai.orders.begin(), ai.orders.end(), [](int o) { return o == 0; })
                     ? NodeKind::Function
                     : NodeKind::Derivative;
        default:
          return NodeKind::Builtin;
      }
    }
    return NodeKind::Product;
  }
  if (num.is_constant() && num.constant_value() == 1 && den.size() == 1) return NodeKind::Power;
  return NodeKind::Product;
}

std::vector<Expr> operands(const Expr& e) {
  std::vector<Expr> out;
  const auto& num = e.numerator();
  const auto& den = e.denominator();
  switch (kind(e)) {
    case NodeKind::Constant:
    case NodeKind::Symbol:
      return out;
    case NodeKind::Function:
    case NodeKind::Derivative:
    case NodeKind::Builtin:
      return info(*e.as_atom()).args;
    case NodeKind::Sum:
      for (const auto& t : num.terms()) out.push_back(poly_expr(Poly::term(t.mono, t.coef)));
      return out;
    case NodeKind::Power:
      if (den.empty()) {
        const auto& pw = num.lead().mono.powers()[0];
        return {Expr::from_atom(pw.atom), Expr(pw.exp)};
      }
      return {poly_expr(factor_poly(den[0].id)), Expr(-den[0].exp)};
    case NodeKind::Product:
      if (den.empty()) {
        const auto& t = num.lead();
        if (t.coef != 1) out.emplace_back(t.coef);
        for (const auto& pw : t.mono.powers()) out.push_back(poly_expr(Poly::atom(pw.atom, pw.exp)));
        return out;
      }
      if (!(num.is_constant() && num.constant_value() == 1)) out.push_back(poly_expr(num));
      for (const auto& d : den) out.push_back(ExprAccess::raw(Poly::constant(1), {d}));
      return out;
  }
  return out;
}

Expr simplify(const Expr& e) {
  switch (kind(e)) {
    case NodeKind::Constant:
      return e;
    case NodeKind::Symbol:
      return Expr::symbol(info(*e.as_atom()).name);
    case NodeKind::Function:
    case NodeKind::Derivative: {
      const auto& ai = info(*e.as_atom());
      std::vector<Expr> args;
      for (const auto& a : ai.args) args.push_back(simplify(a));
      return Expr::derivative(ai.name, std::move(args), ai.orders);
    }
    case NodeKind::Builtin: {
      const auto& ai = info(*e.as_atom());
      const Expr a = simplify(ai.args[0]);
      switch (ai.kind) {
        case AtomKind::Sin:
          return sin(a);
        case AtomKind::Cos:
          return cos(a);
        case AtomKind::Exp:
          return exp(a);
        case AtomKind::Log:
          return log(a);
        default:
          return sqrt(a);
      }
    }
    case NodeKind::Sum: {
      Expr s;
      for (const auto& op : operands(e)) s += simplify(op);
      return s;
    }
    case NodeKind::Product: {
      Expr p(1);
      for (const auto& op : operands(e)) p *= simplify(op);
      return p;
    }
    case NodeKind::Power: {
      const auto ops = operands(e);
      return pow(simplify(ops[0]), static_cast<int>(ops[1].rational_value().get_num().get_si()));
    }
  }
  return e;
}

// ------------------------------------------------------------------ differentiation

Expr differentiate(const Expr& e, const Expr& symbol) {
  auto id = symbol.as_atom();
  if (!id || info(*id).kind != AtomKind::Symbol) {
    throw InputError("differentiate: '" + to_string(symbol) + "' is not a symbol");
  }
  return diff_impl(e, *id);
}

// ------------------------------------------------------------------ zero test

namespace {

void gather_atoms_recursive(const Expr& e, std::set<AtomId>& seen) {
  for (auto a : top_atoms(e)) {
    if (!seen.insert(a).second) continue;
    for (const auto& arg : info(a).args) gather_atoms_recursive(arg, seen);
  }
}

bool contains_kind(const Expr& e, AtomKind k) {
  std::set<AtomId> seen;
  gather_atoms_recursive(e, seen);
  return std::any_of(seen.begin(), seen.end(), [&](AtomId a) { return info(a).kind == k; });
}

}  // namespace

ZeroStatus zero_test(const Expr& e) {
  if (e.is_structural_zero()) return ZeroStatus::Zero;
  std::set<AtomId> atoms;
  gather_atoms_recursive(e, atoms);
  int logs = 0, sqrts = 0;
  std::vector<Expr> trig_args, exp_args;
  for (auto a : atoms) {
    const auto& ai = info(a);
    switch (ai.kind) {
      case AtomKind::Log:
        ++logs;
        if (contains_kind(ai.args[0], AtomKind::Exp)) return ZeroStatus::Undecided;
        break;
      case AtomKind::Sqrt:
        ++sqrts;
        break;
      case AtomKind::Exp:
        if (contains_kind(ai.args[0], AtomKind::Log)) return ZeroStatus::Undecided;
        exp_args.push_back(ai.args[0]);
        break;
      case AtomKind::Sin:
      case AtomKind::Cos:
        if (std::none_of(trig_args.begin(), trig_args.end(),
                         [&](const Expr& t) { return identical(t, ai.args[0]); })) {
          trig_args.push_back(ai.args[0]);
        }
        break;
      default:
        break;
    }
  }
  if (logs > 1 || sqrts > 1) return ZeroStatus::Undecided;
  // Exponentials are canonical only for monomial arguments whose coefficients
  // divide one another; anything else may hide an identity.
  for (std::size_t i = 0; i < exp_args.size(); ++i) {
    if (exp_args.size() > 1 && !exp_args[i].denominator().empty()) return ZeroStatus::Undecided;
    for (std::size_t j = i + 1; j < exp_args.size(); ++j) {
      const Expr r = exp_args[i] / exp_args[j];
      if (!r.is_rational()) continue;
      const Rational q = r.rational_value();
      if (q.get_num() != 1 && q.get_den() != 1 && q.get_num() != -1) return ZeroStatus::Undecided;
    }
  }
  for (std::size_t i = 0; i < trig_args.size(); ++i) {
    for (std::size_t j = i + 1; j < trig_args.size(); ++j) {
      if ((trig_args[i] - trig_args[j]).is_rational() || (trig_args[i] + trig_args[j]).is_rational() ||
          (trig_args[i] / trig_args[j]).is_rational()) {
        return ZeroStatus::Undecided;
      }
    }
  }
  return ZeroStatus::NonZero;
}

bool is_zero(const Expr& e) {
  switch (zero_test(e)) {
    case ZeroStatus::Zero:
      return true;
    case ZeroStatus::NonZero:
      return false;
    case ZeroStatus::Undecided:
      break;
  }
  throw UndecidedError("zero test undecided for " + to_string(e));
}

// ------------------------------------------------------------------ substitution

namespace {

Expr eval_poly(const Poly& p, const std::unordered_map<AtomId, Expr>& values) {
  Expr sum;
  for (const auto& t : p.terms()) {
    Expr term(t.coef);
    for (const auto& pw : t.mono.powers()) term *= pow(values.at(pw.atom), pw.exp);
    sum += term;
  }
  return sum;
}

Expr rebuild_with(const Expr& e, const std::function<Expr(AtomId)>& map_atom) {
  if (e.is_structural_zero()) return e;
  std::unordered_map<AtomId, Expr> values;
  bool changed = false;
  for (auto a : top_atoms(e)) {
    Expr v = map_atom(a);
    auto id = v.as_atom();
    if (!id || *id != a) changed = true;
    values.emplace(a, std::move(v));
  }
  if (!changed) return e;
  Expr num = eval_poly(e.numerator(), values);
  Expr den(1);
  for (const auto& d : e.denominator()) den *= pow(eval_poly(factor_poly(d.id), values), d.exp);
  return num / den;
}

Expr apply_builtin(AtomKind k, const Expr& a) {
  switch (k) {
    case AtomKind::Sin:
      return sin(a);
    case AtomKind::Cos:
      return cos(a);
    case AtomKind::Exp:
      return exp(a);
    case AtomKind::Log:
      return log(a);
    case AtomKind::Sqrt:
      return sqrt(a);
    default:
      throw std::logic_error("apply_builtin: not a builtin");
  }
}

}  // namespace

Expr substitute(const Expr& e, const Substitution& s) {
  std::unordered_map<AtomId, Expr> memo;
  std::function<Expr(AtomId)> map_atom = [&](AtomId a) -> Expr {
    if (auto it = memo.find(a); it != memo.end()) return it->second;
    const AtomInfo& ai = info(a);
    Expr out;
    switch (ai.kind) {
      case AtomKind::Symbol: {
        auto it = s.symbols.find(ai.name);
        out = it != s.symbols.end() ? it->second : Expr::from_atom(a);
        break;
      }
      case AtomKind::Function: {
        std::vector<Expr> args;
        for (const auto& arg : ai.args) args.push_back(rebuild_with(arg, map_atom));
        auto it = s.functions.find(ai.name);
        if (it == s.functions.end()) {
          out = Expr::derivative(ai.name, std::move(args), ai.orders);
          break;
        }
        const FunctionBinding& fb = it->second;
        if (fb.params.size() != args.size()) {
          throw InputError("binding for '" + ai.name + "' expects " + std::to_string(fb.params.size()) +
                           " arguments, got " + std::to_string(args.size()));
        }
        Expr body = fb.body;
        for (std::size_t i = 0; i < args.size(); ++i) {
          for (int k = 0; k < ai.orders[i]; ++k) body = differentiate(body, fb.params[i]);
        }
        std::map<std::string, Expr> params;
        for (std::size_t i = 0; i < args.size(); ++i) params[info(*fb.params[i].as_atom()).name] = args[i];
        out = substitute(body, params);
        break;
      }
      default:
        out = apply_builtin(ai.kind, rebuild_with(ai.args[0], map_atom));
        break;
    }
    memo.emplace(a, out);
    return out;
  };
  return rebuild_with(e, map_atom);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& symbols) {
  Substitution s;
  s.symbols = symbols;
  return substitute(e, s);
}

std::vector<AtomId> free_atoms(const Expr& e) {
  std::set<AtomId> atoms;
  gather_atoms_recursive(e, atoms);
  std::vector<AtomId> out(atoms.begin(), atoms.end());
  std::sort(out.begin(), out.end(), atom_less);
  return out;
}

std::set<std::string> free_functions(const Expr& e) {
  std::set<AtomId> atoms;
  gather_atoms_recursive(e, atoms);
  std::set<std::string> out;
  for (auto a : atoms) {
    if (info(a).kind == AtomKind::Function) out.insert(info(a).name);
  }
  return out;
}

std::set<std::string> free_symbols(const Expr& e) {
  std::set<AtomId> atoms;
  gather_atoms_recursive(e, atoms);
  std::set<std::string> out;
  for (auto a : atoms) {
    if (info(a).kind == AtomKind::Symbol) out.insert(info(a).name);
  }
  return out;
}

// ------------------------------------------------------------------ numeric evaluation

long double evaluate(const Expr& e, const std::map<std::string, long double>& values) {
  std::set<AtomId> atoms;
  gather_atoms_recursive(e, atoms);
  std::set<std::string> unbound;
  for (auto a : atoms) {
    const auto& ai = info(a);
    if (ai.kind == AtomKind::Function || (ai.kind == AtomKind::Symbol && !values.count(ai.name))) {
      unbound.insert(ai.name);
    }
  }
  if (!unbound.empty()) {
    std::string msg = "unbound symbols:";
    for (const auto& n : unbound) msg += " " + n;
    throw UnboundSymbolError(msg);
  }
  std::unordered_map<AtomId, long double> memo;
  std::function<long double(const Expr&)> eval_expr;
  std::function<long double(AtomId)> eval_atom = [&](AtomId a) -> long double {
    if (auto it = memo.find(a); it != memo.end()) return it->second;
    const auto& ai = info(a);
    long double v = 0;
    switch (ai.kind) {
      case AtomKind::Symbol:
        v = values.at(ai.name);
        break;
      case AtomKind::Sin:
        v = std::sin(eval_expr(ai.args[0]));
        break;
      case AtomKind::Cos:
        v = std::cos(eval_expr(ai.args[0]));
        break;
      case AtomKind::Exp:
        v = std::exp(eval_expr(ai.args[0]));
        break;
      case AtomKind::Log:
        v = std::log(eval_expr(ai.args[0]));
        break;
      case AtomKind::Sqrt:
        v = std::sqrt(eval_expr(ai.args[0]));
        break;
      case AtomKind::Function:
        throw UnboundSymbolError("unbound function " + ai.name);
    }
    memo.emplace(a, v);
    return v;
  };
  auto eval_poly_num = [&](const Poly& p) {
    long double s = 0;
    for (const auto& t : p.terms()) {
      long double term = static_cast<long double>(t.coef.get_d());
      for (const auto& pw : t.mono.powers()) term *= std::pow(eval_atom(pw.atom), static_cast<long double>(pw.exp));
      s += term;
    }
    return s;
  };
  eval_expr = [&](const Expr& x) -> long double {
    long double v = eval_poly_num(x.numerator());
    for (const auto& d : x.denominator()) {
      v /= std::pow(eval_poly_num(factor_poly(d.id)), static_cast<long double>(d.exp));
    }
    return v;
  };
  return eval_expr(e);
}

// ------------------------------------------------------------------ printing

namespace {

std::string atom_string(AtomId a);

std::vector<Power> print_sorted(const Monomial& m) {
  std::vector<Power> p = m.powers();
  std::sort(p.begin(), p.end(), [](const Power& x, const Power& y) { return atom_less(x.atom, y.atom); });
  return p;
}

bool print_before(const std::vector<Power>& a, const std::vector<Power>& b) {
  int da = 0, db = 0;
  for (const auto& p : a) da += p.exp;
  for (const auto& p : b) db += p.exp;
  if (da != db) return da > db;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i].atom != b[i].atom) return atom_less(a[i].atom, b[i].atom);
    if (a[i].exp != b[i].exp) return a[i].exp > b[i].exp;
  }
  return a.size() > b.size();
}

std::string mono_string(const std::vector<Power>& powers) {
  std::string s;
  for (const auto& p : powers) {
    if (!s.empty()) s += "*";
    s += atom_string(p.atom);
    if (p.exp != 1) s += "^" + std::to_string(p.exp);
  }
  return s;
}

// Terms in presentation order.
std::vector<std::pair<Rational, std::vector<Power>>> print_terms(const Poly& p) {
  std::vector<std::pair<Rational, std::vector<Power>>> terms;
  for (const auto& t : p.terms()) terms.emplace_back(t.coef, print_sorted(t.mono));
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return print_before(x.second, y.second); });
  return terms;
}

std::string poly_string(const std::vector<std::pair<Rational, std::vector<Power>>>& terms, bool negate) {
  if (terms.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [c0, powers] : terms) {
    Rational c = negate ? Rational(-c0) : c0;
    std::string ms = mono_string(powers);
    std::string ts;
    const bool neg = c < 0;
    Rational ac = neg ? Rational(-c) : c;
    if (ms.empty()) {
      ts = ac.get_str();
    } else if (ac == 1) {
      ts = ms;
    } else {
      ts = ac.get_str() + "*" + ms;
    }
    if (first) {
      s = neg ? "-" + ts : ts;
      first = false;
    } else {
      s += neg ? " - " : " + ";
      s += ts;
    }
  }
  return s;
}

std::string atom_string(AtomId a) {
  const auto& ai = info(a);
  switch (ai.kind) {
    case AtomKind::Symbol:
      return ai.name;
    case AtomKind::Function: {
      std::string args;
      bool plain_coords = true;
      std::set<AtomId> distinct;
      for (std::size_t i = 0; i < ai.args.size(); ++i) {
        if (i) args += ",";
        args += to_string(ai.args[i]);
        auto id = ai.args[i].as_atom();
        if (!id || info(*id).kind != AtomKind::Symbol || !distinct.insert(*id).second) plain_coords = false;
      }
      const std::string call = ai.name + "(" + args + ")";
      const bool differentiated = std::any_of(ai.orders.begin(), ai.orders.end(), [](int o) { return o > 0; });
      if (!differentiated) return call;
      if (plain_coords) {
        std::string s = "diff(" + call;
        for (std::size_t i = 0; i < ai.args.size(); ++i) {
          for (int k = 0; k < ai.orders[i]; ++k) s += "," + info(*ai.args[i].as_atom()).name;
        }
        return s + ")";
      }
      std::string slots;
      for (std::size_t i = 0; i < ai.args.size(); ++i) {
        for (int k = 0; k < ai.orders[i]; ++k) {
          if (!slots.empty()) slots += ",";
          slots += std::to_string(i + 1);
        }
      }
      return "D[" + slots + "](" + ai.name + ")(" + args + ")";
    }
    default:
      return ai.name + "(" + to_string(ai.args[0]) + ")";
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  if (e.is_structural_zero()) return "0";
  const auto num_terms = print_terms(e.numerator());
  if (e.denominator().empty()) return poly_string(num_terms, false);

  struct DenPiece {
    std::string text;
    int exp;
    bool multi;
  };
  bool negate = false;
  std::vector<DenPiece> pieces;
  for (const auto& d : e.denominator()) {
    auto terms = print_terms(factor_poly(d.id));
    bool flip = terms.front().first < 0;
    if (flip && d.exp % 2) negate = !negate;
    pieces.push_back({poly_string(terms, flip), d.exp, terms.size() > 1});
  }
  std::sort(pieces.begin(), pieces.end(), [](const DenPiece& a, const DenPiece& b) { return a.text < b.text; });
  std::string num = poly_string(num_terms, negate);
  if (num_terms.size() > 1) num = "(" + num + ")";
  std::string den;
  for (const auto& p : pieces) {
    if (!den.empty()) den += "*";
    std::string t = p.multi ? "(" + p.text + ")" : p.text;
    if (p.exp != 1) t += "^" + std::to_string(p.exp);
    den += t;
  }
  if (pieces.size() > 1) den = "(" + den + ")";
  return num + "/" + den;
}

}  // namespace cscal::sym
