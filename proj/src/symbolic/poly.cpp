#include "cscal/symbolic/poly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cscal::sym {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t rational_hash(const Rational& q) {
  // Only low limbs; collisions are resolved by full comparison.
  std::uint64_t h = mpz_fdiv_ui(q.get_num_mpz_t(), 1000000007UL);
  h = mix(h, mpz_fdiv_ui(q.get_den_mpz_t(), 1000000007UL));
  return h;
}

// Arithmetic modulo a prime, used as a fast necessary test for divisibility.
constexpr std::uint64_t kPrime = 2147483647ULL;

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  b %= kPrime;
  while (e) {
    if (e & 1) r = r * b % kPrime;
    b = b * b % kPrime;
    e >>= 1;
  }
  return r;
}

std::uint64_t mod_inv(std::uint64_t a) { return mod_pow(a, kPrime - 2); }

std::optional<std::uint64_t> rational_mod(const Rational& q) {
  std::uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), kPrime);
  std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
  if (den == 0) return std::nullopt;
  return num * mod_inv(den) % kPrime;
}

std::uint64_t atom_value(AtomId id) { return splitmix(0x5eed0000ULL + id) % (kPrime - 2) + 2; }

// Coefficient vector (index = degree in `main`) of p with every other atom evaluated mod p.
std::optional<std::vector<std::uint64_t>> univariate_image(const Poly& p, AtomId main) {
  std::vector<std::uint64_t> coeffs(static_cast<std::size_t>(p.max_degree(main)) + 1, 0);
  for (const auto& t : p.terms()) {
    auto c = rational_mod(t.coef);
    if (!c) return std::nullopt;
    std::uint64_t v = *c;
    int deg = 0;
    for (const auto& pw : t.mono.powers()) {
      if (pw.atom == main) {
        deg = pw.exp;
      } else {
        v = v * mod_pow(atom_value(pw.atom), static_cast<std::uint64_t>(pw.exp)) % kPrime;
      }
    }
    coeffs[static_cast<std::size_t>(deg)] = (coeffs[static_cast<std::size_t>(deg)] + v) % kPrime;
  }
  return coeffs;
}

// False only when `d` certainly does not divide `n`.
bool may_divide(const Poly& n, const Poly& d) {
  const AtomId main = d.lead().mono.powers().front().atom;
  auto nimg = univariate_image(n, main);
  auto dimg = univariate_image(d, main);
  if (!nimg || !dimg) return true;
  auto& a = *nimg;
  auto& b = *dimg;
  if (b.back() == 0) return true;  // leading coefficient vanished in the image
  if (a.size() < b.size()) {
    return std::all_of(a.begin(), a.end(), [](std::uint64_t c) { return c == 0; });
  }
  const std::uint64_t inv_lead = mod_inv(b.back());
  const long long db = static_cast<long long>(b.size()) - 1;
  for (long long i = static_cast<long long>(a.size()) - 1; i >= db; --i) {
    const std::uint64_t q = a[static_cast<std::size_t>(i)] * inv_lead % kPrime;
    if (q == 0) continue;
    const long long shift = i - db;
    for (long long j = 0; j <= db; ++j) {
      auto& slot = a[static_cast<std::size_t>(shift + j)];
      slot = (slot + kPrime - q * b[static_cast<std::size_t>(j)] % kPrime) % kPrime;
    }
  }
  for (long long i = 0; i < db && i < static_cast<long long>(a.size()); ++i) {
    if (a[static_cast<std::size_t>(i)] != 0) return false;
  }
  return true;
}

struct MonoGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::compare(a, b) > 0; }
};

}  // namespace

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<Power> powers) : powers_(std::move(powers)) {
  std::sort(powers_.begin(), powers_.end(), [](const Power& a, const Power& b) { return a.atom < b.atom; });
  std::vector<Power> merged;
  merged.reserve(powers_.size());
  for (const auto& p : powers_) {
    if (!merged.empty() && merged.back().atom == p.atom) {
      merged.back().exp += p.exp;
    } else {
      merged.push_back(p);
    }
  }
  std::erase_if(merged, [](const Power& p) { return p.exp == 0; });
  for (const auto& p : merged) {
    if (p.exp < 0) throw std::logic_error("Monomial: negative exponent");
  }
  powers_ = std::move(merged);
}

Monomial Monomial::of(AtomId atom, int exp) {
  Monomial m;
  if (exp != 0) m.powers_.push_back({atom, exp});
  return m;
}

int Monomial::degree_in(AtomId atom) const {
  for (const auto& p : powers_) {
    if (p.atom == atom) return p.exp;
    if (p.atom > atom) break;
  }
  return 0;
}

int Monomial::total_degree() const {
  int d = 0;
  for (const auto& p : powers_) d += p.exp;
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  std::size_t j = 0;
  for (const auto& p : powers_) {
    while (j < other.powers_.size() && other.powers_[j].atom < p.atom) ++j;
    if (j == other.powers_.size() || other.powers_[j].atom != p.atom || other.powers_[j].exp < p.exp) return false;
  }
  return true;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
  Monomial r;
  r.powers_.reserve(powers_.size());
  std::size_t j = 0;
  for (const auto& p : powers_) {
    int e = p.exp;
    if (j < divisor.powers_.size() && divisor.powers_[j].atom == p.atom) {
      e -= divisor.powers_[j].exp;
      ++j;
    }
    if (e > 0) r.powers_.push_back({p.atom, e});
  }
  return r;
}

Monomial Monomial::without(AtomId atom) const {
  Monomial r;
  for (const auto& p : powers_) {
    if (p.atom != atom) r.powers_.push_back(p);
  }
  return r;
}

Monomial Monomial::with_power(AtomId atom, int exp) const {
  Monomial r = without(atom);
  if (exp > 0) {
    auto it = std::lower_bound(r.powers_.begin(), r.powers_.end(), atom,
                               [](const Power& p, AtomId a) { return p.atom < a; });
    r.powers_.insert(it, Power{atom, exp});
  }
  return r;
}

std::uint64_t Monomial::hash() const {
  std::uint64_t h = 0x12345;
  for (const auto& p : powers_) h = mix(mix(h, p.atom), static_cast<std::uint64_t>(p.exp));
  return h;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
  std::size_t i = 0, j = 0;
  while (i < a.powers_.size() && j < b.powers_.size()) {
    const auto& pa = a.powers_[i];
    const auto& pb = b.powers_[j];
    if (pa.atom == pb.atom) {
      if (pa.exp != pb.exp) return pa.exp > pb.exp ? 1 : -1;
      ++i;
      ++j;
    } else if (pa.atom < pb.atom) {
      return 1;  // a has a positive exponent where b has none
    } else {
      return -1;
    }
  }
  if (i < a.powers_.size()) return 1;
  if (j < b.powers_.size()) return -1;
  return 0;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.powers_.reserve(a.powers_.size() + b.powers_.size());
  std::size_t i = 0, j = 0;
  while (i < a.powers_.size() || j < b.powers_.size()) {
    if (j == b.powers_.size() || (i < a.powers_.size() && a.powers_[i].atom < b.powers_[j].atom)) {
      r.powers_.push_back(a.powers_[i++]);
    } else if (i == a.powers_.size() || b.powers_[j].atom < a.powers_[i].atom) {
      r.powers_.push_back(b.powers_[j++]);
    } else {
      r.powers_.push_back({a.powers_[i].atom, a.powers_[i].exp + b.powers_[j].exp});
      ++i;
      ++j;
    }
  }
  return r;
}

Monomial gcd(const Monomial& a, const Monomial& b) {
  std::vector<Power> out;
  std::size_t j = 0;
  for (const auto& p : a.powers()) {
    while (j < b.powers().size() && b.powers()[j].atom < p.atom) ++j;
    if (j < b.powers().size() && b.powers()[j].atom == p.atom) {
      out.push_back({p.atom, std::min(p.exp, b.powers()[j].exp)});
    }
  }
  return Monomial(std::move(out));
}

// ---------------------------------------------------------------- Poly

Poly Poly::constant(const Rational& c) {
  Poly p;
  if (c != 0) {
    p.terms_.push_back({Monomial{}, c});
    p.terms_.back().coef.canonicalize();  // callers may pass num/den with common factors
  }
  return p;
}

Poly Poly::atom(AtomId atom, int exp) {
  Poly p;
  p.terms_.push_back({Monomial::of(atom, exp), Rational(1)});
  return p;
}

Poly Poly::term(Monomial mono, Rational coef) {
  Poly p;
  if (coef != 0) {
    coef.canonicalize();
    p.terms_.push_back({std::move(mono), std::move(coef)});
  }
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return Monomial::compare(a.mono, b.mono) > 0; });
  Poly p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
  return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty()); }

Rational Poly::constant_value() const { return terms_.empty() ? Rational(0) : terms_[0].coef; }

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Poly r;
  r.terms_.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() && j < b.terms_.size()) {
    int c = Monomial::compare(a.terms_[i].mono, b.terms_[j].mono);
    if (c > 0) {
      r.terms_.push_back(a.terms_[i++]);
    } else if (c < 0) {
      r.terms_.push_back(b.terms_[j++]);
    } else {
      Rational s = a.terms_[i].coef + b.terms_[j].coef;
      if (s != 0) r.terms_.push_back({a.terms_[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
  for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  if (a.is_constant()) return b.scaled(a.terms_[0].coef);
  if (b.is_constant()) return a.scaled(b.terms_[0].coef);
  const Poly& big = a.size() >= b.size() ? a : b;
  const Poly& small = a.size() >= b.size() ? b : a;
  if (small.size() == 1) return big.times(small.terms_[0].mono, small.terms_[0].coef);
  std::vector<Term> out;
  out.reserve(a.size() * b.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) out.push_back({ta.mono * tb.mono, ta.coef * tb.coef});
  }
  return Poly::from_terms(std::move(out));
}

Poly Poly::scaled(const Rational& c) const {
  if (c == 0) return {};
  Poly r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

Poly Poly::times(const Monomial& m, const Rational& c) const {
  if (c == 0) return {};
  Poly r;
  r.terms_.reserve(terms_.size());
  // Multiplication by a monomial preserves the term order.
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
  return r;
}

Poly Poly::pow(int k) const {
  if (k < 0) throw std::logic_error("Poly::pow: negative exponent");
  Poly result = Poly::constant(1);
  Poly base = *this;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.empty()) throw std::domain_error("Poly::divide_exact: division by zero polynomial");
  if (empty()) return Poly{};
  if (d.size() == 1) {
    const auto& dt = d.terms_[0];
    Poly q;
    q.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!dt.mono.divides(t.mono)) return std::nullopt;
      q.terms_.push_back({t.mono.quotient(dt.mono), t.coef / dt.coef});
    }
    return q;
  }
  if (!d.lead().mono.divides(lead().mono)) return std::nullopt;
  if (!may_divide(*this, d)) return std::nullopt;

  std::map<Monomial, Rational, MonoGreater> rem;
  for (const auto& t : terms_) rem.emplace(t.mono, t.coef);
  const auto& dl = d.lead();
  std::vector<Term> quot;
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!dl.mono.divides(it->first)) return std::nullopt;
    Monomial qm = it->first.quotient(dl.mono);
    Rational qc = it->second / dl.coef;
    rem.erase(it);
    for (std::size_t k = 1; k < d.terms_.size(); ++k) {
      Monomial m = d.terms_[k].mono * qm;
      Rational c = d.terms_[k].coef * qc;
      auto [pos, inserted] = rem.try_emplace(std::move(m), 0);
      pos->second -= c;
      if (pos->second == 0) rem.erase(pos);
    }
    quot.push_back({std::move(qm), std::move(qc)});
  }
  Poly q;
  q.terms_ = std::move(quot);  // produced in decreasing order
  return q;
}

Poly Poly::divide_monomial(const Monomial& m) const {
  Poly r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono.quotient(m), t.coef});
  return r;
}

Poly Poly::formal_derivative(AtomId atom) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    int e = t.mono.degree_in(atom);
    if (e == 0) continue;
    out.push_back({t.mono.with_power(atom, e - 1), t.coef * e});
  }
  return Poly::from_terms(std::move(out));
}

Rational Poly::content() const {
  if (terms_.empty()) return Rational(1);
  mpz_class g = 0, l = 1;
  for (const auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.get_den_mpz_t());
  }
  Rational c(g, l);
  c.canonicalize();
  if (c < 0) c = -c;
  return c;
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial g = terms_[0].mono;
  for (std::size_t i = 1; i < terms_.size() && !g.empty(); ++i) g = gcd(g, terms_[i].mono);
  return g;
}

std::vector<AtomId> Poly::atoms() const {
  std::vector<AtomId> out;
  for (const auto& t : terms_) {
    for (const auto& p : t.mono.powers()) out.push_back(p.atom);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int Poly::max_degree(AtomId atom) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree_in(atom));
  return d;
}

int Poly::min_degree(AtomId atom) const {
  if (terms_.empty()) return 0;
  int d = terms_[0].mono.degree_in(atom);
  for (std::size_t i = 1; i < terms_.size() && d > 0; ++i) d = std::min(d, terms_[i].mono.degree_in(atom));
  return d;
}

std::uint64_t Poly::hash() const {
  std::uint64_t h = 0xabcdef;
  for (const auto& t : terms_) h = mix(mix(h, t.mono.hash()), rational_hash(t.coef));
  return h;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) return false;
  }
  return true;
}

}  // namespace cscal::sym
