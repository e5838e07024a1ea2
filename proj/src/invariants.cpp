#include "cscal/invariants.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <numeric>

#include "cscal/error.hpp"

namespace cscal {

std::vector<InvariantRecipe> standard_invariant_set(int order, std::size_t n) {
  std::vector<InvariantRecipe> out;
  out.push_back({"R", "R", {{"R", ""}}, 0});
  out.push_back({"Ricci2", "R_ab R^ab", {{"Ric", "ab"}, {"Ric", "ab"}}, 0});
  out.push_back({"Kretschmann", "R_abcd R^abcd", {{"Riem", "abcd"}, {"Riem", "abcd"}}, 0});
  out.push_back({"Riemann3", "R^ab_cd R^cd_ef R^ef_ab", {{"Riem", "abcd"}, {"Riem", "cdef"}, {"Riem", "efab"}}, 0});
  if (n >= 4) out.push_back({"Weyl2", "C_abcd C^abcd", {{"Weyl", "abcd"}, {"Weyl", "abcd"}}, 0});
  out.push_back({"Ricci3", "R_ab R^b_c R^ca", {{"Ric", "ab"}, {"Ric", "bc"}, {"Ric", "ca"}}, 0});
  if (n >= 4) out.push_back({"WeylRicci2", "C_abcd R^ac R^bd", {{"Weyl", "abcd"}, {"Ric", "ac"}, {"Ric", "bd"}}, 0});
  if (n == 4) {
    out.push_back({"EpsRiemann2", "eps^abcd R_ab^ef R_cdef", {{"eps", "abcd"}, {"Riem", "abef"}, {"Riem", "cdef"}}, 0});
  }
  if (order >= 1) {
    out.push_back({"Beltrami1(R,R)", "g^ab R_;a R_;b", {{"dR", "a"}, {"dR", "a"}}, 1});
    out.push_back({"dRiemann2", "R_abcd;e R^abcd;e", {{"dRiem", "abcde"}, {"dRiem", "abcde"}}, 1});
  }
  if (order >= 2) {
    out.push_back({"BoxR", "g^ab R_;ab", {{"ddR", "aa"}}, 2});
    out.push_back({"BoxRiemann.Riemann", "g^ef R_abcd;ef R^abcd", {{"ddRiem", "abcdee"}, {"Riem", "abcd"}}, 2});
  }
  return out;
}

const InvariantValue* InvariantReport::find(const std::string& name) const {
  for (const auto& v : values) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

bool InvariantReport::all_zero() const {
  return std::all_of(values.begin(), values.end(), [](const InvariantValue& v) { return v.zero; });
}

namespace {

int required_order(const std::string& tensor) {
  if (tensor == "dR" || tensor == "dRiem") return 1;
  if (tensor == "ddR" || tensor == "ddRiem") return 2;
  return 0;
}

// Evaluates recipes against one bundle, caching raised ingredient variants.
class Evaluator {
 public:
  explicit Evaluator(const CurvatureBundle& b) : b_(b), g_(*b.metric) {}

  Expr evaluate(const InvariantRecipe& r) {
    validate(r);
    // First occurrence of a label stays covariant; the second is raised.
    std::array<int, 128> seen{};
    std::vector<const Tensor*> tensors;
    std::vector<std::vector<int>> labels;
    for (const auto& f : r.factors) {
      std::string pattern;
      std::vector<int> ls;
      for (char c : f.labels) {
        pattern += seen[static_cast<unsigned char>(c)]++ ? 'u' : 'd';
        ls.push_back(static_cast<unsigned char>(c));
      }
      tensors.push_back(&variant(f.tensor, pattern, r.name));
      labels.push_back(std::move(ls));
    }
    assignment_.fill(-1);
    return accumulate(tensors, labels, 0, Expr(1));
  }

 private:
  const CurvatureBundle& b_;
  const Metric& g_;
  std::map<std::string, Tensor> base_;
  std::map<std::string, Tensor> variants_;
  std::array<int, 128> assignment_{};

  static void validate(const InvariantRecipe& r) {
    std::map<char, int> count;
    for (const auto& f : r.factors) {
      for (char c : f.labels) {
        if (!std::isalpha(static_cast<unsigned char>(c))) throw InputError("recipe " + r.name + ": bad label");
        ++count[c];
      }
    }
    for (const auto& [c, k] : count) {
      if (k != 2) throw InputError("recipe " + r.name + ": label '" + std::string(1, c) + "' must appear exactly twice");
    }
  }

  const Tensor& base(const std::string& name, const std::string& recipe) {
    if (auto it = base_.find(name); it != base_.end()) return it->second;
    const int need = required_order(name);
    if (need > b_.order) {
      throw MathError("recipe " + recipe + " needs derivative order " + std::to_string(need) + " but the bundle has " +
                      std::to_string(b_.order));
    }
    Tensor t(g_.chart_ptr(), {});
    if (name == "R") {
      t = Tensor::scalar(g_.chart_ptr(), b_.scalar);
    } else if (name == "Ric") {
      t = b_.ricci;
    } else if (name == "Riem") {
      t = b_.riemann_down;
    } else if (name == "Weyl") {
      if (!b_.weyl) throw MathError("recipe " + recipe + " needs the Weyl tensor (n >= 3)");
      t = *b_.weyl;
    } else if (name == "eps") {
      t = levi_civita(g_);
    } else if (name == "dR" || name == "ddR") {
      t = b_.scalar_derivs[need - 1];
    } else if (name == "dRiem" || name == "ddRiem") {
      t = b_.riemann_derivs[need - 1];
    } else {
      throw InputError("recipe " + recipe + ": unknown tensor '" + name + "'");
    }
    return base_.emplace(name, std::move(t)).first->second;
  }

  const Tensor& variant(const std::string& name, const std::string& pattern, const std::string& recipe) {
    const std::string key = name + ":" + pattern;
    if (auto it = variants_.find(key); it != variants_.end()) return it->second;
    const Tensor& t = base(name, recipe);
    if (t.rank() != pattern.size()) {
      throw InputError("recipe " + recipe + ": tensor " + name + " has rank " + std::to_string(t.rank()));
    }
    Tensor v = t;
    v.clear_symmetries();
    for (std::size_t s = 0; s < pattern.size(); ++s) {
      if (pattern[s] == 'u') v = raise_index(v, s, g_);
    }
    return variants_.emplace(key, std::move(v)).first->second;
  }

  // Depth-first over factors; each factor enumerates the labels it binds first.
  Expr accumulate(const std::vector<const Tensor*>& ts, const std::vector<std::vector<int>>& ls, std::size_t k,
                  const Expr& acc) {
    if (k == ts.size()) return acc;
    const Tensor& t = *ts[k];
    const auto& lab = ls[k];
    std::vector<int> fresh;
    for (int l : lab) {
      if (assignment_[l] < 0 && std::find(fresh.begin(), fresh.end(), l) == fresh.end()) fresh.push_back(l);
    }
    const std::size_t n = g_.dim();
    Expr sum;
    Index idx(lab.size());
    for_each_index(n, fresh.size(), [&](const Index& vals) {
      for (std::size_t i = 0; i < fresh.size(); ++i) assignment_[fresh[i]] = vals[i];
      for (std::size_t s = 0; s < lab.size(); ++s) idx[s] = assignment_[lab[s]];
      const Expr& c = t[idx];
      if (!c.is_structural_zero()) sum += accumulate(ts, ls, k + 1, acc * c);
    });
    for (int l : fresh) assignment_[l] = -1;
    return sum;
  }
};

}  // namespace

Expr evaluate_recipe(const InvariantRecipe& recipe, const CurvatureBundle& b) { return Evaluator(b).evaluate(recipe); }

InvariantReport evaluate_invariants(const std::vector<InvariantRecipe>& recipes, const CurvatureBundle& b) {
  Evaluator ev(b);
  InvariantReport rep;
  rep.order = 0;
  for (const auto& r : recipes) {
    Expr v = ev.evaluate(r);
    const bool zero = sym::is_zero(v);
    auto f = sym::free_functions(v);
    rep.functions.insert(f.begin(), f.end());
    rep.values.push_back({r.name, r.formula, r.order, std::move(v), zero});
    rep.order = std::max(rep.order, r.order);
  }
  return rep;
}

InvariantReport invariant_report(const Metric& g, int order) {
  const auto b = make_bundle(g, order);
  auto rep = evaluate_invariants(standard_invariant_set(order, g.dim()), b);
  rep.order = order;
  return rep;
}

Expr beltrami_first(const Expr& phi, const Metric& g) {
  const std::size_t n = g.dim();
  std::vector<Expr> d(n);
  for (std::size_t a = 0; a < n; ++a) d[a] = sym::differentiate(phi, g.chart().coord(a));
  Expr s;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!g.inv(a, b).is_structural_zero() && !d[a].is_structural_zero() && !d[b].is_structural_zero()) {
        s += g.inv(a, b) * d[a] * d[b];
      }
    }
  }
  return s;
}

std::set<std::string> detect_phantom_functions(const Metric& g, const InvariantReport& report) {
  std::set<std::string> out;
  for (const auto& f : g.functions()) {
    if (!report.functions.count(f)) out.insert(f);
  }
  return out;
}

// ------------------------------------------------------------------ torsion probe

const char* to_string(ProbeAnsatz a) { return a == ProbeAnsatz::Gradient ? "gradient" : "levicivita"; }

const char* to_string(ProbeVerdict v) {
  return v == ProbeVerdict::Distinguished ? "DISTINGUISHED" : "INCONCLUSIVE";
}

ProbeAnsatz parse_ansatz(const std::string& s) {
  if (s == "gradient") return ProbeAnsatz::Gradient;
  if (s == "levicivita" || s == "levi-civita") return ProbeAnsatz::LeviCivita;
  throw InputError("unknown torsion ansatz '" + s + "' (expected gradient or levicivita)");
}

namespace {

std::string fresh_name(std::string base, const std::set<std::string>& taken) {
  while (taken.count(base)) base += "_";
  return base;
}

std::set<std::string> taken_names(const Metric& g) {
  std::set<std::string> taken = g.functions();
  for (const auto& row : g.components()) {
    for (const auto& e : row) {
      auto s = sym::free_symbols(e);
      taken.insert(s.begin(), s.end());
    }
  }
  taken.insert(g.chart().names().begin(), g.chart().names().end());
  return taken;
}

}  // namespace

std::size_t probe_test_function_count(ProbeAnsatz ansatz, std::size_t n) {
  if (ansatz == ProbeAnsatz::Gradient) return 1;
  if (n < 3) throw DimensionError("Levi-Civita torsion ansatz needs n >= 3");
  std::size_t c = 1;  // binomial(n, n-3)
  for (std::size_t i = 0; i < 3; ++i) c = c * (n - i) / (i + 1);
  return c;
}

Torsion probe_torsion(const Metric& g, ProbeAnsatz ansatz, bool null_test_functions,
                      const std::vector<std::string>& names) {
  const Chart& ch = g.chart();
  const std::size_t n = g.dim();
  const auto taken = taken_names(g);
  if (!names.empty()) {
    if (names.size() != probe_test_function_count(ansatz, n)) {
      throw InputError(std::string(to_string(ansatz)) + " ansatz in " + std::to_string(n) + " dimensions needs " +
                       std::to_string(probe_test_function_count(ansatz, n)) + " test function name(s)");
    }
    for (const auto& s : names) {
      if (taken.count(s)) throw InputError("test function name '" + s + "' is already used by the metric");
    }
  }
  std::size_t next_name = 0;
  std::vector<Expr> coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back(ch.coord(i));
  if (ansatz == ProbeAnsatz::Gradient) {
    Expr psi = null_test_functions ? Expr()
                                   : Expr::function(names.empty() ? fresh_name("psi", taken) : names[0], coords);
    return torsion_gradient_ansatz(psi, g.chart_ptr());
  }
  if (n < 3) throw DimensionError("Levi-Civita torsion ansatz needs n >= 3");
  const std::size_t k = n - 3;
  Tensor psi(g.chart_ptr(), std::vector<Variance>(k, Variance::Up));
  if (!null_test_functions) {
    // One fresh function per strictly increasing index set, extended antisymmetrically.
    for (std::size_t off = 0; off < psi.size(); ++off) {
      const Index idx = psi.index_of(off);
      if (!std::is_sorted(idx.begin(), idx.end()) || std::adjacent_find(idx.begin(), idx.end()) != idx.end()) continue;
      std::string name = "Psi";
      if (k > 0) name += "_";
      for (int i : idx) name += ch.name(i);
      const Expr f = Expr::function(names.empty() ? fresh_name(name, taken) : names[next_name++], coords);
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        Index p(k);
        for (std::size_t i = 0; i < k; ++i) p[i] = idx[perm[i]];
        psi[p] = permutation_sign(perm) > 0 ? f : -f;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  return torsion_levicivita_ansatz(psi, g);
}

InvariantReport probe_report(const Metric& g, ProbeAnsatz ansatz, int order, bool null_test_functions,
                             const std::vector<std::string>& names) {
  const Torsion tau = probe_torsion(g, ansatz, null_test_functions, names);
  const auto b = make_bundle(g, connection_with_torsion(g, tau), order);
  auto rep = evaluate_invariants(standard_invariant_set(order, g.dim()), b);
  rep.order = order;
  return rep;
}

ProbeResult discriminate_with_torsion(const Metric& g1, const Metric& g2, ProbeAnsatz ansatz, int order) {
  if (g1.dim() != g2.dim()) throw DimensionError("probe needs metrics of equal dimension");
  if (!(g1.signature() == g2.signature())) throw DimensionError("probe needs metrics of equal signature");
  ProbeResult res;
  res.first = probe_report(g1, ansatz, order);
  res.second = probe_report(g2, ansatz, order);
  for (const auto& a : res.first.values) {
    const auto* b = res.second.find(a.name);
    if (!b || a.zero == b->zero) continue;
    res.reasons.push_back(a.name + ": " + (a.zero ? "zero for the first metric, non-zero for the second"
                                                   : "non-zero for the first metric, zero for the second"));
  }
  // Structural route: metric function symbols surviving in one set of scalars only.
  if (res.reasons.empty()) {
    const auto f1 = detect_phantom_functions(g1, res.first);
    const auto f2 = detect_phantom_functions(g2, res.second);
    const auto s1 = g1.functions();
    const auto s2 = g2.functions();
    if (s1 == s2 && f1 != f2) {
      res.reasons.push_back("phantom function sets differ between the two torsional invariant sets");
    }
  }
  res.verdict = res.reasons.empty() ? ProbeVerdict::Inconclusive : ProbeVerdict::Distinguished;
  return res;
}

}  // namespace cscal
