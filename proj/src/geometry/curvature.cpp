#include "cscal/geometry/curvature.hpp"

#include "cscal/error.hpp"

namespace cscal {

namespace {

int I(std::size_t v) { return static_cast<int>(v); }

std::string index_label(const Chart& c, std::initializer_list<std::size_t> idx) {
  std::string s = "(";
  bool first = true;
  for (auto i : idx) {
    if (!first) s += ",";
    s += c.name(i);
    first = false;
  }
  return s + ")";
}

}  // namespace

Tensor riemann(const Connection& gamma) {
  const std::size_t n = gamma.dim();
  const Chart& ch = gamma.chart();
  // d_c gamma^a_bd
  std::vector<Expr> dg(n * n * n * n);
  auto at4 = [n](std::size_t a, std::size_t b, std::size_t c, std::size_t d) { return ((a * n + b) * n + c) * n + d; };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t d = 0; d < n; ++d) {
        const Expr& g = gamma(a, b, d);
        if (g.is_structural_zero()) continue;
        for (std::size_t c = 0; c < n; ++c) dg[at4(a, b, d, c)] = sym::differentiate(g, ch.coord(c));
      }
    }
  }
  Tensor R(gamma.chart_ptr(), {Variance::Up, Variance::Down, Variance::Down, Variance::Down});
  R.declare({2, 3, true});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t d = c + 1; d < n; ++d) {
          Expr v = dg[at4(a, b, d, c)] - dg[at4(a, b, c, d)];
          for (std::size_t m = 0; m < n; ++m) {
            const Expr& amc = gamma(a, m, c);
            const Expr& amd = gamma(a, m, d);
            if (!amc.is_structural_zero()) {
              const Expr& mbd = gamma(m, b, d);
              if (!mbd.is_structural_zero()) v += amc * mbd;
            }
            if (!amd.is_structural_zero()) {
              const Expr& mbc = gamma(m, b, c);
              if (!mbc.is_structural_zero()) v -= amd * mbc;
            }
          }
          R.at({I(a), I(b), I(c), I(d)}) = v;
        }
      }
    }
  }
  R.fill_from_canonical();
  return R;
}

Tensor ricci(const CurvatureBundle& b) { return contract(b.riemann, 0, 2); }

Expr ricci_scalar(const CurvatureBundle& b) {
  const Metric& g = *b.metric;
  Expr s;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    for (std::size_t c = 0; c < g.dim(); ++c) {
      const Expr& gi = g.inv(a, c);
      const Expr& r = b.ricci.at({I(a), I(c)});
      if (!gi.is_structural_zero() && !r.is_structural_zero()) s += gi * r;
    }
  }
  return s;
}

Tensor weyl(const CurvatureBundle& b) {
  const Metric& g = *b.metric;
  const std::size_t n = g.dim();
  if (n < 3) throw DimensionError("Weyl tensor needs n >= 3");
  // Project onto tensors with the algebraic symmetries of a Riemannian curvature
  // tensor (pair symmetry, no totally antisymmetric part). The projection is the
  // identity for torsion-free connections.
  Tensor S = b.riemann_down;
  S.clear_symmetries();
  if (!b.connection.torsion_free()) {
    for_each_index(n, 4, [&](const Index& i) {
      const Expr& x = b.riemann_down[i];
      const Expr& y = b.riemann_down.at({i[2], i[3], i[0], i[1]});
      S[i] = identical(x, y) ? x : Expr(sym::Rational(1, 2)) * (x + y);
    });
    S = S - antisymmetrize(S, {0, 1, 2, 3});
  }
  Tensor ric(g.chart_ptr(), {Variance::Down, Variance::Down});
  Expr scalar;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      Expr s;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t c = 0; c < n; ++c) {
          const Expr& gi = g.inv(a, c);
          if (gi.is_structural_zero()) continue;
          const Expr& r = S.at({I(a), I(x), I(c), I(y)});
          if (!r.is_structural_zero()) s += gi * r;
        }
      }
      ric.at({I(x), I(y)}) = s;
      if (!g.inv(x, y).is_structural_zero() && !s.is_structural_zero()) scalar += g.inv(x, y) * s;
    }
  }
  const Expr k1(sym::Rational(1, static_cast<long>(n - 2)));
  const Expr k2 = scalar * Expr(sym::Rational(1, static_cast<long>((n - 1) * (n - 2))));
  Tensor C(g.chart_ptr(), std::vector<Variance>(4, Variance::Down));
  C.declare({0, 1, true});
  C.declare({2, 3, true});
  auto Ric = [&](std::size_t x, std::size_t y) -> const Expr& { return ric.at({I(x), I(y)}); };
  for_each_index(n, 4, [&](const Index& i) {
    if (!C.is_canonical(i)) return;
    const std::size_t a = i[0], bb = i[1], c = i[2], d = i[3];
    Expr v = S[i];
    Expr mixed = g(a, c) * Ric(bb, d) - g(a, d) * Ric(bb, c) - g(bb, c) * Ric(a, d) + g(bb, d) * Ric(a, c);
    v -= k1 * mixed;
    v += k2 * (g(a, c) * g(bb, d) - g(a, d) * g(bb, c));
    C[i] = v;
  });
  C.fill_from_canonical();
  return C;
}

CurvatureBundle make_bundle(const Metric& g, const Connection& gamma, int order) {
  if (!(gamma.chart() == g.chart())) throw InputError("connection and metric live on different charts");
  if (order < 0) throw InputError("derivative order must be non-negative");
  CurvatureBundle b{std::make_shared<const Metric>(g), gamma, riemann(gamma), Tensor(g.chart_ptr(), {}), Tensor(g.chart_ptr(), {}), Expr(), {}, {}, {},
                    order};
  b.riemann_down = lower_index(b.riemann, 0, g);
  b.riemann_down.declare({0, 1, true});
  b.riemann_down.declare({2, 3, true});
  b.ricci = ricci(b);
  b.scalar = ricci_scalar(b);
  if (g.dim() >= 3) b.weyl = weyl(b);
  Tensor cur = b.riemann_down;
  Tensor scal = Tensor::scalar(g.chart_ptr(), b.scalar);
  for (int k = 1; k <= order; ++k) {
    cur = covariant_derivative(cur, gamma);
    b.riemann_derivs.push_back(cur);
    scal = covariant_derivative(scal, gamma);
    b.scalar_derivs.push_back(scal);
  }
  return b;
}

CurvatureBundle make_bundle(const Metric& g, int order) { return make_bundle(g, christoffel(g), order); }

bool IdentityReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const IdentityCheck* IdentityReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

IdentityReport check_identities(const CurvatureBundle& b) {
  const Metric& g = *b.metric;
  const Connection& gamma = b.connection;
  const Chart& ch = g.chart();
  const std::size_t n = g.dim();
  IdentityReport rep;

  {
    IdentityCheck c{"metricity", true, ""};
    const Tensor dg = covariant_derivative(metric_tensor(g), gamma);
    for (std::size_t off = 0; off < dg.size() && c.passed; ++off) {
      if (!sym::is_zero(dg.components()[off])) {
        const Index i = dg.index_of(off);
        c.passed = false;
        c.detail = "grad g" + index_label(ch, {std::size_t(i[0]), std::size_t(i[1]), std::size_t(i[2])}) + " != 0";
      }
    }
    rep.checks.push_back(c);
  }

  const Tensor& R = b.riemann;
  if (gamma.torsion_free()) {
    IdentityCheck c{"first Bianchi", true, ""};
    for_each_index(n, 4, [&](const Index& i) {
      if (!c.passed) return;
      const int a = i[0], x = i[1], y = i[2], z = i[3];
      if (!(x < y && y < z)) return;
      Expr s = R.at({a, x, y, z}) + R.at({a, y, z, x}) + R.at({a, z, x, y});
      if (!sym::is_zero(s)) {
        c.passed = false;
        c.detail = "R^a_[bcd]" + index_label(ch, {std::size_t(a), std::size_t(x), std::size_t(y), std::size_t(z)}) + " != 0";
      }
    });
    rep.checks.push_back(c);
  } else {
    // Alt_{kmn} [d_k tau^a_mn + gamma^a_bk tau^b_mn - R^a_nkm] = 0
    const Torsion tau = torsion_of(gamma);
    IdentityCheck c{"torsional Jacobi", true, ""};
    auto term = [&](std::size_t a, std::size_t k, std::size_t m, std::size_t nn) {
      Expr v = sym::differentiate(tau(a, m, nn), ch.coord(k));
      for (std::size_t bb = 0; bb < n; ++bb) {
        const Expr& gk = gamma(a, bb, k);
        const Expr& t = tau(bb, m, nn);
        if (!gk.is_structural_zero() && !t.is_structural_zero()) v += gk * t;
      }
      return v - R.at({I(a), I(nn), I(k), I(m)});
    };
    for (std::size_t a = 0; a < n && c.passed; ++a) {
      for (std::size_t k = 0; k < n && c.passed; ++k) {
        for (std::size_t m = k + 1; m < n && c.passed; ++m) {
          for (std::size_t nn = m + 1; nn < n && c.passed; ++nn) {
            Expr s = term(a, k, m, nn) + term(a, m, nn, k) + term(a, nn, k, m) - term(a, m, k, nn) - term(a, k, nn, m) -
                     term(a, nn, m, k);
            if (!sym::is_zero(s)) {
              c.passed = false;
              c.detail = "component" + index_label(ch, {a, k, m, nn}) + " != 0";
            }
          }
        }
      }
    }
    rep.checks.push_back(c);
  }

  if (gamma.torsion_free()) {
    IdentityCheck c{"second Bianchi", true, ""};
    const Tensor D = b.order >= 1 ? b.riemann_derivs[0] : covariant_derivative(b.riemann_down, gamma);
    for_each_index(n, 5, [&](const Index& i) {
      if (!c.passed) return;
      const int a = i[0], x = i[1], cc = i[2], d = i[3], e = i[4];
      if (a >= x || !(cc < d && d < e)) return;
      Expr s = D.at({a, x, cc, d, e}) + D.at({a, x, d, e, cc}) + D.at({a, x, e, cc, d});
      if (!sym::is_zero(s)) {
        c.passed = false;
        c.detail = "grad_[e R_|ab|cd]" + index_label(ch, {std::size_t(a), std::size_t(x), std::size_t(cc),
                                                           std::size_t(d), std::size_t(e)}) + " != 0";
      }
    });
    rep.checks.push_back(c);
  }

  {
    // cyclic_{ecd} (d_e R^a_bcd + gamma^a_me R^m_bcd - gamma^m_be R^a_mcd) = 0
    IdentityCheck c{"second Bianchi (Cartan form)", true, ""};
    auto term = [&](std::size_t a, std::size_t bb, std::size_t cc, std::size_t d, std::size_t e) {
      Expr v = sym::differentiate(R.at({I(a), I(bb), I(cc), I(d)}), ch.coord(e));
      for (std::size_t m = 0; m < n; ++m) {
        const Expr& g1 = gamma(a, m, e);
        if (!g1.is_structural_zero()) {
          const Expr& r1 = R.at({I(m), I(bb), I(cc), I(d)});
          if (!r1.is_structural_zero()) v += g1 * r1;
        }
        const Expr& g2 = gamma(m, bb, e);
        if (!g2.is_structural_zero()) {
          const Expr& r2 = R.at({I(a), I(m), I(cc), I(d)});
          if (!r2.is_structural_zero()) v -= g2 * r2;
        }
      }
      return v;
    };
    for (std::size_t a = 0; a < n && c.passed; ++a) {
      for (std::size_t bb = 0; bb < n && c.passed; ++bb) {
        for (std::size_t cc = 0; cc < n && c.passed; ++cc) {
          for (std::size_t d = cc + 1; d < n && c.passed; ++d) {
            for (std::size_t e = d + 1; e < n && c.passed; ++e) {
              Expr s = term(a, bb, cc, d, e) + term(a, bb, d, e, cc) + term(a, bb, e, cc, d);
              if (!sym::is_zero(s)) {
                c.passed = false;
                c.detail = "component" + index_label(ch, {a, bb, cc, d, e}) + " != 0";
              }
            }
          }
        }
      }
    }
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace cscal
