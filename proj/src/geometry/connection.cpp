#include "cscal/geometry/connection.hpp"

#include <algorithm>
#include <numeric>

#include "cscal/error.hpp"

namespace cscal {

namespace {

std::size_t cube(std::size_t n) { return n * n * n; }

std::size_t at3(std::size_t n, std::size_t a, std::size_t b, std::size_t c) { return (a * n + b) * n + c; }

// d_c g_ab for all a,b,c.
std::vector<Expr> metric_partials(const Metric& g) {
  const std::size_t n = g.dim();
  std::vector<Expr> d(cube(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        d[at3(n, a, b, c)] = sym::differentiate(g(a, b), g.chart().coord(c));
        d[at3(n, b, a, c)] = d[at3(n, a, b, c)];
      }
    }
  }
  return d;
}

std::vector<Expr> raise_first(const Metric& g, const std::vector<Expr>& low) {
  const std::size_t n = g.dim();
  std::vector<Expr> up(cube(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t m = 0; m < n; ++m) {
      if (g.inv(a, m).is_structural_zero()) continue;
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = 0; c < n; ++c) {
          const Expr& v = low[at3(n, m, b, c)];
          if (!v.is_structural_zero()) up[at3(n, a, b, c)] += g.inv(a, m) * v;
        }
      }
    }
  }
  return up;
}

}  // namespace

Torsion::Torsion(ChartPtr chart, std::vector<Expr> comps) : chart_(std::move(chart)), comps_(std::move(comps)) {
  const std::size_t n = chart_->dim();
  if (comps_.size() != cube(n)) throw DimensionError("torsion needs n^3 components");
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = b; c < n; ++c) {
        if (!sym::is_zero(comps_[at3(n, a, b, c)] + comps_[at3(n, a, c, b)])) {
          throw InputError("torsion is not antisymmetric in its lower indices at (" + chart_->name(a) + "; " +
                           chart_->name(b) + "," + chart_->name(c) + ")");
        }
      }
    }
  }
}

Torsion Torsion::zero(ChartPtr chart) {
  const std::size_t n = chart->dim();
  return Torsion(std::move(chart), std::vector<Expr>(cube(n)));
}

bool Torsion::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Expr& e) { return sym::is_zero(e); });
}

Tensor Torsion::as_tensor() const {
  Tensor t(chart_, {Variance::Up, Variance::Down, Variance::Down});
  t.components() = comps_;
  t.declare({1, 2, true});
  return t;
}

Connection::Connection(ChartPtr chart, std::vector<Expr> comps, bool torsion_free)
    : chart_(std::move(chart)), comps_(std::move(comps)), torsion_free_(torsion_free) {
  if (comps_.size() != cube(chart_->dim())) throw DimensionError("connection needs n^3 components");
}

Connection christoffel(const Metric& g) {
  const std::size_t n = g.dim();
  const auto d = metric_partials(g);
  std::vector<Expr> low(cube(n));
  const Expr half(sym::Rational(1, 2));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t k = m; k < n; ++k) {
        Expr v = d[at3(n, a, m, k)] + d[at3(n, a, k, m)] - d[at3(n, m, k, a)];
        if (!v.is_structural_zero()) v = half * v;
        low[at3(n, a, m, k)] = v;
        low[at3(n, a, k, m)] = v;
      }
    }
  }
  return Connection(g.chart_ptr(), raise_first(g, low), true);
}

Connection connection_with_torsion(const Metric& g, const Torsion& tau) {
  if (!(tau.chart() == g.chart())) throw InputError("torsion and metric live on different charts");
  if (tau.is_zero()) return christoffel(g);
  const std::size_t n = g.dim();
  const auto d = metric_partials(g);
  // tau_amn = g_ab tau^b_mn
  std::vector<Expr> tl(cube(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (g(a, b).is_structural_zero()) continue;
      for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
          const Expr& t = tau(b, m, k);
          if (!t.is_structural_zero()) tl[at3(n, a, m, k)] += g(a, b) * t;
        }
      }
    }
  }
  std::vector<Expr> low(cube(n));
  const Expr half(sym::Rational(1, 2));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t k = 0; k < n; ++k) {
        Expr chris = d[at3(n, a, m, k)] + d[at3(n, a, k, m)] - d[at3(n, m, k, a)];
        Expr asym = tl[at3(n, a, m, k)] + tl[at3(n, m, k, a)] - tl[at3(n, k, a, m)];
        low[at3(n, a, m, k)] = half * (chris - asym);
      }
    }
  }
  return Connection(g.chart_ptr(), raise_first(g, low), false);
}

Torsion torsion_of(const Connection& gamma) {
  const std::size_t n = gamma.dim();
  std::vector<Expr> t(cube(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) t[at3(n, a, b, c)] = gamma(a, c, b) - gamma(a, b, c);
    }
  }
  return Torsion(gamma.chart_ptr(), std::move(t));
}

Torsion torsion_gradient_ansatz(const Expr& psi, ChartPtr chart) {
  const std::size_t n = chart->dim();
  std::vector<Expr> dpsi(n);
  for (std::size_t c = 0; c < n; ++c) dpsi[c] = sym::differentiate(psi, chart->coord(c));
  std::vector<Expr> t(cube(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        Expr v;
        if (a == b) v += dpsi[c];
        if (a == c) v -= dpsi[b];
        t[at3(n, a, b, c)] = v;
      }
    }
  }
  return Torsion(std::move(chart), std::move(t));
}

Torsion torsion_levicivita_ansatz(const Tensor& psi, const Metric& g) {
  const std::size_t n = g.dim();
  if (n < 3) throw DimensionError("Levi-Civita torsion ansatz needs n >= 3");
  if (psi.rank() != n - 3) throw DimensionError("Levi-Civita torsion ansatz needs an (n-3)-form");
  for (auto v : psi.slots()) {
    if (v != Variance::Up) throw SlotError("Levi-Civita torsion ansatz expects a contravariant form");
  }
  const Tensor eps = levi_civita(g);
  long fact = 1;
  for (std::size_t k = 2; k <= n - 3; ++k) fact *= static_cast<long>(k);
  const Expr norm(sym::Rational(1, fact));
  // lowered: tau_mbc = 1/(n-3)! eps_mbcI psi^I
  std::vector<Expr> low(cube(n));
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (m == b || m == c || b == c) continue;
        Expr s;
        for (std::size_t off = 0; off < psi.size(); ++off) {
          const Expr& p = psi.components()[off];
          if (p.is_structural_zero()) continue;
          Index idx{static_cast<int>(m), static_cast<int>(b), static_cast<int>(c)};
          Index rest = psi.index_of(off);
          idx.insert(idx.end(), rest.begin(), rest.end());
          const Expr& e = eps[idx];
          if (!e.is_structural_zero()) s += e * p;
        }
        low[at3(n, m, b, c)] = norm * s;
      }
    }
  }
  return Torsion(g.chart_ptr(), raise_first(g, low));
}

Tensor covariant_derivative(const Tensor& t, const Connection& gamma) {
  if (!(t.chart() == gamma.chart())) throw InputError("tensor and connection live on different charts");
  const std::size_t n = t.dim();
  const std::size_t r = t.rank();
  std::vector<Variance> slots = t.slots();
  slots.push_back(Variance::Down);
  Tensor out(t.chart_ptr(), std::move(slots));
  for (const auto& s : t.symmetries()) out.declare(s);
  Index src(r);
  for (std::size_t off = 0; off < t.size(); ++off) {
    const Index idx = t.index_of(off);
    if (!t.is_canonical(idx)) continue;
    Index oidx = idx;
    oidx.push_back(0);
    for (std::size_t m = 0; m < n; ++m) {
      Expr v = sym::differentiate(t.components()[off], gamma.chart().coord(m));
      for (std::size_t k = 0; k < r; ++k) {
        src = idx;
        for (std::size_t z = 0; z < n; ++z) {
          src[k] = static_cast<int>(z);
          const Expr& tz = t[src];
          if (tz.is_structural_zero()) continue;
          if (t.slots()[k] == Variance::Up) {
            const Expr& c = gamma(idx[k], z, m);
            if (!c.is_structural_zero()) v += c * tz;
          } else {
            const Expr& c = gamma(z, idx[k], m);
            if (!c.is_structural_zero()) v -= c * tz;
          }
        }
      }
      oidx[r] = static_cast<int>(m);
      out[oidx] = v;
    }
  }
  out.fill_from_canonical();
  return out;
}

}  // namespace cscal
