#include "cscal/criterion.hpp"

#include <algorithm>

#include "cscal/error.hpp"

namespace cscal {

namespace {

int I(std::size_t v) { return static_cast<int>(v); }

void check_chart(const VectorField& N, const Metric& g) {
  if (!(*N.chart == g.chart())) throw InputError("vector field and metric live on different charts");
}

std::vector<Expr> lower(const VectorField& N, const Metric& g) {
  const std::size_t n = g.dim();
  std::vector<Expr> low(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!g(a, b).is_structural_zero() && !N.comps[b].is_structural_zero()) low[a] += g(a, b) * N.comps[b];
    }
  }
  return low;
}

bool totally_antisymmetric_part_zero(const Tensor& t) {
  const std::size_t n = t.dim();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        Expr s = t.at({I(a), I(b), I(c)}) + t.at({I(b), I(c), I(a)}) + t.at({I(c), I(a), I(b)}) -
                 t.at({I(b), I(a), I(c)}) - t.at({I(a), I(c), I(b)}) - t.at({I(c), I(b), I(a)});
        if (!sym::is_zero(s)) return false;
      }
    }
  }
  return true;
}

}  // namespace

VectorField::VectorField(ChartPtr c, std::vector<Expr> n) : chart(std::move(c)), comps(std::move(n)) {
  if (comps.size() != chart->dim()) {
    throw DimensionError("vector field needs " + std::to_string(chart->dim()) + " components, got " +
                         std::to_string(comps.size()));
  }
}

VectorField VectorField::coordinate(ChartPtr c, std::size_t a) {
  std::vector<Expr> n(c->dim());
  n.at(a) = Expr(1);
  return VectorField(std::move(c), std::move(n));
}

bool VectorField::is_zero() const {
  return std::all_of(comps.begin(), comps.end(), [](const Expr& e) { return sym::is_zero(e); });
}

std::string VectorField::str() const {
  std::string s;
  for (std::size_t a = 0; a < comps.size(); ++a) {
    if (sym::is_zero(comps[a])) continue;
    std::string c = sym::to_string(comps[a]);
    std::string term = "d_" + chart->name(a);
    if (c == "1") {
      c = term;
    } else if (c == "-1") {
      c = "-" + term;
    } else {
      if (comps[a].numerator().size() > 1) c = "(" + c + ")";
      c += "*" + term;
    }
    if (s.empty()) {
      s = c;
    } else if (c[0] == '-') {
      s += " - " + c.substr(1);
    } else {
      s += " + " + c;
    }
  }
  return s.empty() ? "0" : s;
}

bool is_null(const VectorField& N, const Metric& g) {
  check_chart(N, g);
  const auto low = lower(N, g);
  Expr s;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    if (!low[a].is_structural_zero() && !N.comps[a].is_structural_zero()) s += low[a] * N.comps[a];
  }
  return sym::is_zero(s);
}

bool is_normal(const VectorField& N, const Metric& g) {
  check_chart(N, g);
  const std::size_t n = g.dim();
  Tensor low(g.chart_ptr(), {Variance::Down});
  low.components() = lower(N, g);
  const Tensor dn = covariant_derivative(low, christoffel(g));  // dn[c,b] = grad_b N_c
  Tensor X(g.chart_ptr(), {Variance::Down, Variance::Down, Variance::Down});
  for_each_index(n, 3, [&](const Index& i) {
    const Expr& na = low.components()[i[0]];
    const Expr& d = dn.at({i[2], i[1]});
    if (!na.is_structural_zero() && !d.is_structural_zero()) X[i] = na * d;
  });
  return totally_antisymmetric_part_zero(X);
}

bool is_normal_forms(const VectorField& N, const Metric& g) {
  check_chart(N, g);
  const std::size_t n = g.dim();
  const auto low = lower(N, g);
  Tensor X(g.chart_ptr(), {Variance::Down, Variance::Down, Variance::Down});
  for_each_index(n, 3, [&](const Index& i) {
    const Expr& na = low[i[0]];
    if (na.is_structural_zero()) return;
    Expr d = sym::differentiate(low[i[2]], g.chart().coord(i[1]));
    if (!d.is_structural_zero()) X[i] = na * d;
  });
  return totally_antisymmetric_part_zero(X);
}

bool is_nondiverging(const VectorField& N, const Metric& g) {
  check_chart(N, g);
  const Connection gamma = christoffel(g);
  const std::size_t n = g.dim();
  Expr div;
  for (std::size_t a = 0; a < n; ++a) {
    div += sym::differentiate(N.comps[a], g.chart().coord(a));
    for (std::size_t m = 0; m < n; ++m) {
      const Expr& c = gamma(a, m, a);
      if (!c.is_structural_zero() && !N.comps[m].is_structural_zero()) div += c * N.comps[m];
    }
  }
  return sym::is_zero(div);
}

GeodesicResult is_geodesic(const VectorField& N, const Metric& g) {
  check_chart(N, g);
  const Connection gamma = christoffel(g);
  const std::size_t n = g.dim();
  std::vector<Expr> acc(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Expr& nb = N.comps[b];
      if (nb.is_structural_zero()) continue;
      Expr d = sym::differentiate(N.comps[a], g.chart().coord(b));
      for (std::size_t z = 0; z < n; ++z) {
        const Expr& c = gamma(a, z, b);
        if (!c.is_structural_zero() && !N.comps[z].is_structural_zero()) d += c * N.comps[z];
      }
      if (!d.is_structural_zero()) acc[a] += nb * d;
    }
  }
  GeodesicResult r;
  r.strict = std::all_of(acc.begin(), acc.end(), [](const Expr& e) { return sym::is_zero(e); });
  if (r.strict) {
    r.projective = true;
    r.lambda = Expr();
    return r;
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (sym::is_zero(N.comps[a])) continue;
    const Expr lambda = acc[a] / N.comps[a];
    bool ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) ok = sym::is_zero(acc[c] - lambda * N.comps[c]);
    if (ok) {
      r.projective = true;
      r.lambda = lambda;
    }
    break;
  }
  return r;
}

bool lie_annihilates(const VectorField& N, const InvariantReport& report) {
  for (const auto& v : report.values) {
    Expr s;
    for (std::size_t a = 0; a < N.comps.size(); ++a) {
      if (N.comps[a].is_structural_zero()) continue;
      s += N.comps[a] * sym::differentiate(v.value, N.chart->coord(a));
    }
    if (!sym::is_zero(s)) return false;
  }
  return true;
}

const char* to_string(CriterionVerdict v) {
  return v == CriterionVerdict::CandidateDegenerate ? "CANDIDATE-DEGENERATE" : "NEGATIVE";
}

CriterionReport check_theorem_criterion(const Metric& g, const VectorField& N, const InvariantReport* report) {
  check_chart(N, g);
  if (N.is_zero()) throw InputError("the zero vector field is not a valid criterion input");
  CriterionReport r{N, {}, {}, {}, {}, {}, {}, {}, {}};
  r.null = is_null(N, g);
  r.normal = is_normal(N, g);
  r.normal_forms = is_normal_forms(N, g);
  if (r.normal != r.normal_forms) throw MathError("normality cross-check disagrees for field " + N.str());
  r.nondiverging = is_nondiverging(N, g);
  r.geodesic = is_geodesic(N, g);
  if (report) {
    r.annihilates = lie_annihilates(N, *report);
    r.annihilation_order = report->order;
  }
  r.verdict = (r.null && r.normal && r.nondiverging) ? CriterionVerdict::CandidateDegenerate : CriterionVerdict::Negative;
  return r;
}

std::vector<VectorField> search_null_congruence(const Metric& g) {
  std::vector<VectorField> out;
  if (g.is_definite()) return out;
  const std::size_t n = g.dim();
  const ChartPtr& ch = g.chart_ptr();
  std::vector<VectorField> trial;
  for (std::size_t a = 0; a < n; ++a) trial.push_back(VectorField::coordinate(ch, a));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      // (d_a + l d_b) null: g_aa + 2 l g_ab + l^2 g_bb = 0 with constant coefficients
      if (!g(a, a).is_rational() || !g(a, b).is_rational() || !g(b, b).is_rational()) continue;
      const sym::Rational A = g(a, a).rational_value(), B = g(a, b).rational_value(), C = g(b, b).rational_value();
      std::vector<Expr> roots;
      if (C == 0) {
        if (B != 0) roots.emplace_back(sym::Rational(-A / (2 * B)));
      } else {
        const sym::Rational D = B * B - A * C;
        if (D >= 0) {
          const Expr s = sym::sqrt(Expr(D));
          roots.push_back((Expr(-B) + s) / Expr(C));
          if (D != 0) roots.push_back((Expr(-B) - s) / Expr(C));
        }
      }
      for (const auto& l : roots) {
        if (l.is_structural_zero()) continue;
        std::vector<Expr> c(n);
        c[a] = Expr(1);
        c[b] = l;
        trial.emplace_back(ch, std::move(c));
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Expr> c(n);
    for (std::size_t a = 0; a < n; ++a) c[a] = g.inv(a, k);
    trial.emplace_back(ch, std::move(c));
  }
  for (auto& f : trial) {
    if (f.is_zero()) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const VectorField& o) {
      for (std::size_t a = 0; a < n; ++a) {
        if (!sym::is_zero(o.comps[a] - f.comps[a])) return false;
      }
      return true;
    });
    if (dup) continue;
    if (is_null(f, g) && is_normal(f, g) && is_nondiverging(f, g)) out.push_back(std::move(f));
  }
  return out;
}

Metric construct_kundt_metric(ChartPtr chart, const Expr& A, const std::vector<Expr>& B, const Matrix& gamma,
                              Signature sig) {
  const std::size_t n = chart->dim();
  if (n < 3) throw DimensionError("Kundt form needs n >= 3");
  const std::size_t m = n - 2;
  if (B.size() != m) throw DimensionError("Kundt form needs " + std::to_string(m) + " functions B_k");
  if (gamma.size() != m) throw DimensionError("Kundt form needs a " + std::to_string(m) + "x" + std::to_string(m) + " gamma");
  for (const auto& row : gamma) {
    if (row.size() != m) throw DimensionError("gamma must be square");
  }
  const Expr detg = determinant(gamma);
  if (sym::is_zero(detg)) throw DegenerateMetricError("gamma is degenerate");
  if (!sym::is_zero(sym::differentiate(detg, chart->coord(1)))) {
    throw ConstraintViolation("d_v det gamma != 0: " + sym::to_string(detg) + " depends on " + chart->name(1));
  }
  Matrix g(n, std::vector<Expr>(n));
  g[0][0] = Expr(2) * A;
  g[0][1] = g[1][0] = Expr(1);
  for (std::size_t k = 0; k < m; ++k) {
    g[0][k + 2] = g[k + 2][0] = B[k];
    for (std::size_t l = 0; l < m; ++l) g[k + 2][l + 2] = gamma[k][l];
  }
  if (sig.plus + sig.minus == 0) sig = Signature{static_cast<int>(n) - 1, 1};
  return Metric(std::move(chart), std::move(g), sig);
}

bool kundt_form_check(const Metric& g) {
  const std::size_t n = g.dim();
  if (n < 3) return false;
  if (!sym::is_zero(g(0, 1) - Expr(1))) return false;
  for (std::size_t a = 1; a < n; ++a) {
    if (!sym::is_zero(g(1, a))) return false;
  }
  Matrix gamma(n - 2, std::vector<Expr>(n - 2));
  for (std::size_t i = 2; i < n; ++i) {
    for (std::size_t j = 2; j < n; ++j) gamma[i - 2][j - 2] = g(i, j);
  }
  const Expr detg = determinant(gamma);
  if (sym::is_zero(detg)) return false;
  return sym::is_zero(sym::differentiate(detg, g.chart().coord(1)));
}

const char* to_string(GeometryVerdict v) {
  return v == GeometryVerdict::ScalarCharacterizable ? "SCALAR-CHARACTERIZABLE" : "NOT-SCALAR-CHARACTERIZABLE";
}

Classification classify_geometry(const Metric& g, int order) {
  Classification c;
  c.order = order;
  const auto fields = search_null_congruence(g);
  if (fields.empty()) {
    c.verdict = GeometryVerdict::ScalarCharacterizable;
    c.reason = g.is_definite() ? "definite signature: no null vector fields"
                               : "no null, normal, non-diverging field found by the search";
    return c;
  }
  const auto bundle = make_bundle(g, order);
  InvariantReport rep = evaluate_invariants(standard_invariant_set(order, g.dim()), bundle);
  rep.order = order;
  for (const auto& f : fields) c.candidates.push_back(check_theorem_criterion(g, f, &rep));
  c.phantoms = detect_phantom_functions(g, rep);
  if (!c.phantoms.empty()) {
    c.verdict = GeometryVerdict::NotScalarCharacterizable;
    c.reason = "metric functions missing from every invariant up to order " + std::to_string(order);
  } else if (rep.all_zero() && !bundle.riemann.is_zero()) {
    c.verdict = GeometryVerdict::NotScalarCharacterizable;
    c.reason = "non-flat geometry with all invariants zero up to order " + std::to_string(order);
  } else {
    c.verdict = GeometryVerdict::ScalarCharacterizable;
    c.reason = "candidate fields exist but every metric function reaches the invariants up to order " +
               std::to_string(order);
  }
  c.invariants = std::move(rep);
  return c;
}

}  // namespace cscal
