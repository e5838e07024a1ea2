#pragma once

// Shared test helpers: random expression and metric generators and a purely
// numeric curvature oracle (central differences of evaluated metric components).

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cscal/error.hpp"
#include "cscal/catalog.hpp"
#include "cscal/tensor/metric.hpp"

namespace testing {

using cscal::sym::Expr;
using Real = long double;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Point = std::vector<Real>;

// Random expressions over the given symbols built from + - * /, integer powers
// and sin/cos/exp. Divisions by an exact zero are retried.
class ExprGen {
 public:
  ExprGen(std::vector<Expr> symbols, unsigned seed) : syms_(std::move(symbols)), rng_(seed) {}

  Expr leaf() {
    if (pick(3) == 0) return Expr(cscal::sym::Rational(static_cast<long>(pick(9)) - 4, 1 + static_cast<long>(pick(3))));
    return syms_[pick(syms_.size())];
  }

  Expr operator()(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(9)) {
      case 0:
      case 1:
        return (*this)(depth - 1) + (*this)(depth - 1);
      case 2:
        return (*this)(depth - 1) - (*this)(depth - 1);
      case 3:
      case 4:
        return (*this)(depth - 1) * (*this)(depth - 1);
      case 5: {
        for (;;) {
          Expr d = (*this)(depth - 1);
          if (!d.is_structural_zero()) return (*this)(depth - 1) / d;
        }
      }
      case 6:
        return cscal::sym::pow((*this)(depth - 1), 2 + static_cast<int>(pick(2)));
      case 7:
        return pick(2) ? cscal::sym::sin(leaf() + leaf()) : cscal::sym::cos(leaf() * leaf());
      default:
        return cscal::sym::exp(leaf());
    }
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  Real uniform(Real lo, Real hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::mt19937& rng() { return rng_; }

 private:
  std::vector<Expr> syms_;
  std::mt19937 rng_;
};

// Numeric metric g(x) from a symbolic metric with every function already
// substituted away; `params` binds constants.
inline std::function<Mat(const Point&)> numeric_metric(const cscal::Metric& g, std::map<std::string, Real> params) {
  return [&g, params](const Point& x) {
    auto values = params;
    for (std::size_t i = 0; i < g.dim(); ++i) values[g.chart().name(i)] = x[i];
    Mat m(g.dim(), g.dim());
    for (std::size_t a = 0; a < g.dim(); ++a) {
      for (std::size_t b = 0; b < g.dim(); ++b) m(a, b) = cscal::sym::evaluate(g(a, b), values);
    }
    return m;
  };
}

// gamma[a][b][c] = 1/2 g^ad (d_c g_db + d_b g_dc - d_d g_bc)
class NumericCurvature {
 public:
  using Metric = std::function<Mat(const Point&)>;
  using Gamma = std::vector<std::vector<std::vector<Real>>>;

  NumericCurvature(Metric g, std::size_t n, Real h = 1e-4L) : g_(std::move(g)), n_(n), h_(h) {}

  std::vector<Mat> dg(const Point& x) const {
    std::vector<Mat> out;
    for (std::size_t c = 0; c < n_; ++c) {
      Point p = x, m = x;
      p[c] += h_;
      m[c] -= h_;
      out.push_back((g_(p) - g_(m)) / (2 * h_));
    }
    return out;
  }

  Gamma christoffel(const Point& x) const {
    const Mat ginv = g_(x).inverse();
    const auto d = dg(x);
    Gamma G(n_, std::vector<std::vector<Real>>(n_, std::vector<Real>(n_, 0)));
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        for (std::size_t c = 0; c < n_; ++c) {
          Real s = 0;
          for (std::size_t e = 0; e < n_; ++e) s += ginv(a, e) * (d[c](e, b) + d[b](e, c) - d[e](b, c));
          G[a][b][c] = s / 2;
        }
      }
    }
    return G;
  }

  // R[a][b][c][d] = R^a_bcd
  std::vector<Real> riemann(const Point& x) const {
    const auto G = christoffel(x);
    std::vector<Gamma> dG;  // dG[c] = d_c gamma
    for (std::size_t c = 0; c < n_; ++c) {
      Point p = x, m = x;
      p[c] += h_;
      m[c] -= h_;
      auto Gp = christoffel(p), Gm = christoffel(m);
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
          for (std::size_t e = 0; e < n_; ++e) Gp[a][b][e] = (Gp[a][b][e] - Gm[a][b][e]) / (2 * h_);
      dG.push_back(Gp);
    }
    std::vector<Real> R(n_ * n_ * n_ * n_);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        for (std::size_t c = 0; c < n_; ++c)
          for (std::size_t d = 0; d < n_; ++d) {
            Real s = dG[c][a][b][d] - dG[d][a][b][c];
            for (std::size_t m = 0; m < n_; ++m) s += G[a][m][c] * G[m][b][d] - G[a][m][d] * G[m][b][c];
            R[((a * n_ + b) * n_ + c) * n_ + d] = s;
          }
    return R;
  }

  // R_abcd R^abcd
  Real kretschmann(const Point& x) const {
    const Mat g = g_(x), gi = g.inverse();
    const auto R = riemann(x);
    auto at = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
      return R[((a * n_ + b) * n_ + c) * n_ + d];
    };
    std::vector<Real> low(R.size()), up(R.size());
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        for (std::size_t c = 0; c < n_; ++c)
          for (std::size_t d = 0; d < n_; ++d) {
            Real s = 0;
            for (std::size_t e = 0; e < n_; ++e) s += g(a, e) * at(e, b, c, d);
            low[((a * n_ + b) * n_ + c) * n_ + d] = s;
          }
    // raise b, c, d of R^a_bcd
    Real k = 0;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        for (std::size_t c = 0; c < n_; ++c)
          for (std::size_t d = 0; d < n_; ++d) {
            Real s = 0;
            for (std::size_t p = 0; p < n_; ++p)
              for (std::size_t q = 0; q < n_; ++q)
                for (std::size_t r = 0; r < n_; ++r) s += gi(b, p) * gi(c, q) * gi(d, r) * at(a, p, q, r);
            k += low[((a * n_ + b) * n_ + c) * n_ + d] * s;
          }
    return k;
  }

 private:
  Metric g_;
  std::size_t n_;
  Real h_;
};

// Random smooth function of the chart coordinates: a few monomials, some with
// a trig or exponential factor.
inline Expr random_function(const cscal::ChartPtr& ch, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3), var(0, static_cast<int>(ch->dim()) - 1), deg(0, 2), kind(0, 3);
  Expr out;
  for (int t = 0; t < 3; ++t) {
    Expr term(coef(rng));
    for (int k = deg(rng); k > 0; --k) term *= ch->coord(var(rng));
    switch (kind(rng)) {
      case 0:
        term *= cscal::sym::sin(ch->coord(var(rng)));
        break;
      case 1:
        term *= cscal::sym::cos(ch->coord(var(rng)));
        break;
      case 2:
        term *= cscal::sym::exp(ch->coord(var(rng)));
        break;
      default:
        break;
    }
    out += term;
  }
  return out;
}

// gamma = P(v) S P(v)^T with det P = 1, so det gamma = det S does not see v.
inline cscal::Matrix random_kundt_gamma(const cscal::ChartPtr& ch, std::mt19937& rng) {
  const Expr u = ch->coord(0), v = ch->coord(1), x = ch->coord(2), y = ch->coord(3);
  std::uniform_int_distribution<int> c(1, 3);
  const Expr s00 = Expr(c(rng)) + x * x, s11 = Expr(c(rng)) + cscal::sym::exp(u);
  cscal::Matrix S{{s00, Expr()}, {Expr(), s11}};
  const Expr h = Expr(c(rng)) * v * (y + Expr(c(rng)));
  cscal::Matrix P{{Expr(1), h}, {Expr(), Expr(1)}};
  cscal::Matrix out(2, std::vector<Expr>(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out[i][j] += P[i][k] * S[k][l] * P[j][l];
  return out;
}

// pp-wave with the profile function replaced by a concrete smooth function.
inline cscal::Metric concrete_pp_wave() {
  const auto e = cscal::catalog_get("pp_wave_vacuum");
  cscal::sym::Substitution s;
  const Expr t = Expr::symbol("t_");
  s.functions["f"] = {{t}, cscal::sym::cos(t) + 2};
  cscal::Matrix m = e.metric.components();
  for (auto& row : m)
    for (auto& c : row) c = cscal::sym::substitute(c, s);
  return cscal::Metric(e.metric.chart_ptr(), m, e.metric.signature());
}

inline bool close(Real a, Real b, Real rel = 1e-5L, Real abs = 1e-9L) {
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b)) + abs;
}

}  // namespace testing
