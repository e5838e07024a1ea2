#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cscal/catalog.hpp"
#include "cscal/error.hpp"
#include "cscal/geometry/curvature.hpp"
#include "support.hpp"

using namespace cscal;
using sym::Rational;

namespace {

bool same(const Expr& a, const Expr& b) { return sym::is_zero(a - b); }

// Direct formula, written out independently of the library's christoffel().
Expr christoffel_oracle(const Metric& g, std::size_t a, std::size_t b, std::size_t c) {
  const Chart& ch = g.chart();
  Expr s;
  for (std::size_t d = 0; d < g.dim(); ++d) {
    const Expr lower = sym::differentiate(g(d, c), ch.coord(b)) + sym::differentiate(g(d, b), ch.coord(c)) -
                       sym::differentiate(g(b, c), ch.coord(d));
    s += g.inv(a, d) * lower;
  }
  return Expr(Rational(1, 2)) * s;
}

Torsion gradient(const Metric& g, const std::string& name = "psi") {
  std::vector<Expr> args;
  for (std::size_t i = 0; i < g.dim(); ++i) args.push_back(g.chart().coord(i));
  return torsion_gradient_ansatz(Expr::function(name, args), g.chart_ptr());
}

Torsion levicivita(const Metric& g) {
  std::vector<Expr> args;
  for (std::size_t i = 0; i < g.dim(); ++i) args.push_back(g.chart().coord(i));
  Tensor psi(g.chart_ptr(), std::vector<Variance>(g.dim() - 3, Variance::Up));
  if (g.dim() == 3) {
    psi.components()[0] = Expr::function("Psi", args);
  } else {
    for (std::size_t i = 0; i < g.dim(); ++i) psi.at({int(i)}) = Expr::function("Psi" + std::to_string(i), args);
  }
  return torsion_levicivita_ansatz(psi, g);
}

std::vector<std::string> torsion_free_entries() { return catalog_names(); }

}  // namespace

TEST_CASE("christoffel symbols") {
  const auto mink = christoffel(catalog_get("minkowski").metric);
  for (const auto& c : mink.components()) CHECK(c.is_structural_zero());

  const auto sphere = catalog_get("sphere2").metric;
  const auto G = christoffel(sphere);
  const Expr th = sphere.chart().coord(0);
  CHECK(same(G(0, 1, 1), -sym::sin(th) * sym::cos(th)));
  CHECK(same(G(1, 0, 1), sym::cos(th) / sym::sin(th)));
  CHECK(G.torsion_free());

  // Numeric oracle at theta = pi/4, a = 1.3.
  const auto gn = testing::numeric_metric(sphere, {{"a", 1.3L}});
  const testing::NumericCurvature num(gn, 2);
  const auto Gn = num.christoffel({std::numbers::pi_v<long double> / 4, 0.2L});
  const std::map<std::string, long double> at{{"th", std::numbers::pi_v<long double> / 4}, {"ph", 0.2L}, {"a", 1.3L}};
  CHECK(testing::close(sym::evaluate(G(0, 1, 1), at), Gn[0][1][1]));
  CHECK(testing::close(sym::evaluate(G(1, 0, 1), at), Gn[1][0][1]));
}

TEST_CASE("christoffel matches the direct formula on every catalog metric") {
  for (const auto& name : catalog_names()) {
    const auto e = catalog_get(name);
    const auto G = christoffel(e.metric);
    const std::size_t n = e.metric.dim();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) CHECK_MESSAGE(same(G(a, b, c), christoffel_oracle(e.metric, a, b, c)), name);
  }
}

TEST_CASE("torsion validation and ansatz basics") {
  auto ch = make_chart({"x", "y"});
  std::vector<Expr> bad(8);
  bad[1] = Expr(1);  // tau^0_01 without its antisymmetric partner
  CHECK_THROWS_AS(Torsion(ch, bad), InputError);
  CHECK(torsion_gradient_ansatz(Expr(5), ch).is_zero());

  const auto e2 = catalog_get("euclidean", {2, "", ""}).metric;
  CHECK_THROWS_AS(torsion_levicivita_ansatz(Tensor(e2.chart_ptr(), {}), e2), DimensionError);

  const auto e3 = catalog_get("euclidean").metric;
  CHECK(torsion_levicivita_ansatz(Tensor::scalar(e3.chart_ptr(), Expr()), e3).is_zero());
}

TEST_CASE("gradient ansatz: formula and trace") {
  for (std::size_t n : {2u, 3u, 4u}) {
    const auto g = catalog_get("euclidean", {n, "", ""}).metric;
    const Torsion tau = gradient(g);
    std::vector<Expr> args;
    for (std::size_t i = 0; i < n; ++i) args.push_back(g.chart().coord(i));
    const Expr psi = Expr::function("psi", args);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          Expr expect;
          if (a == b) expect += sym::differentiate(psi, g.chart().coord(c));
          if (a == c) expect -= sym::differentiate(psi, g.chart().coord(b));
          CHECK(identical(tau(a, b, c), expect));
        }
    // tau^b_bc = (n-1) psi_,c, through the library contraction
    const Tensor tr = contract(tau.as_tensor(), 0, 1);
    for (std::size_t c = 0; c < n; ++c) {
      CHECK(same(tr.at({int(c)}), Expr(long(n - 1)) * sym::differentiate(psi, g.chart().coord(c))));
    }
  }
}

TEST_CASE("levi-civita ansatz against direct epsilon contraction") {
  // n = 4 Minkowski, Psi^t = f(x): tau^a_bc = eps^a_bci Psi^i
  const auto g = catalog_get("minkowski").metric;
  const Expr f = Expr::function("f", {g.chart().coord(1)});
  Tensor psi(g.chart_ptr(), {Variance::Up});
  psi.at({0}) = f;
  const Torsion tau = torsion_levicivita_ansatz(psi, g);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        Expr expect;
        for (int i = 0; i < 4; ++i) {
          if (psi.at({i}).is_structural_zero()) continue;
          int perm[4] = {a, b, c, i};
          // eps^a_bci = g^aa eps_abci for diagonal g, eps_0123 = 1
          expect += g.inv(a, a) * Expr(permutation_sign(perm)) * psi.at({i});
        }
        CHECK(identical(tau(a, b, c), expect));
      }

  // n = 3: tau_abc = eps_abc Psi is totally antisymmetric.
  const auto e3 = catalog_get("walker3").metric;
  const Tensor low = lower_index(levicivita(e3).as_tensor(), 0, e3);
  const Tensor eps = levi_civita(e3);
  const Expr Psi = Expr::function("Psi", {e3.chart().coord(0), e3.chart().coord(1), e3.chart().coord(2)});
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) CHECK(same(low.at({a, b, c}), eps.at({a, b, c}) * Psi));
}

TEST_CASE("connection with torsion") {
  for (const auto& name : {"minkowski", "pp_wave_vacuum", "schwarzschild"}) {
    const auto g = catalog_get(name).metric;
    const auto lc = christoffel(g);
    const auto reduced = connection_with_torsion(g, Torsion::zero(g.chart_ptr()));
    CHECK(reduced.torsion_free());
    for (std::size_t i = 0; i < lc.components().size(); ++i) {
      CHECK(identical(reduced.components()[i], lc.components()[i]));
    }
    for (const Torsion& tau : {gradient(g), levicivita(g)}) {
      const auto conn = connection_with_torsion(g, tau);
      CHECK_FALSE(conn.torsion_free());
      const Torsion back = torsion_of(conn);
      for (std::size_t i = 0; i < tau.components().size(); ++i) {
        CHECK(same(back.components()[i], tau.components()[i]));
      }
      CHECK(check_identities(make_bundle(g, conn, 0)).find("metricity")->passed);
    }
  }
}

TEST_CASE("totally antisymmetric torsion leaves the symmetric part alone") {
  for (const auto& name : {"minkowski", "pp_wave_vacuum"}) {
    const auto g = catalog_get(name).metric;
    const auto lc = christoffel(g);
    const auto conn = connection_with_torsion(g, levicivita(g));
    const std::size_t n = g.dim();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          CHECK(same(Expr(Rational(1, 2)) * (conn(a, b, c) + conn(a, c, b)), lc(a, b, c)));
        }
    // The gradient ansatz does change the symmetric part.
    const auto grad = connection_with_torsion(g, gradient(g));
    bool differs = false;
    for (std::size_t i = 0; i < n * n * n && !differs; ++i) {
      const std::size_t a = i / (n * n), b = (i / n) % n, c = i % n;
      differs = !same(Expr(Rational(1, 2)) * (grad(a, b, c) + grad(a, c, b)), lc(a, b, c));
    }
    CHECK(differs);
  }
}

TEST_CASE("covariant derivative") {
  const auto sch = catalog_get("schwarzschild").metric;
  CHECK(covariant_derivative(metric_tensor(sch), christoffel(sch)).is_zero());

  const Expr r = sch.chart().coord(1), th = sch.chart().coord(2);
  const Tensor d = covariant_derivative(Tensor::scalar(sch.chart_ptr(), r * r * sym::sin(th)), christoffel(sch));
  CHECK(same(d.at({1}), 2 * r * sym::sin(th)));
  CHECK(same(d.at({2}), r * r * sym::cos(th)));
  CHECK(d.at({0}).is_structural_zero());

  const auto mink = catalog_get("minkowski").metric;
  Tensor c(mink.chart_ptr(), {Variance::Up, Variance::Down});
  for (auto& x : c.components()) x = Expr(3);
  CHECK(covariant_derivative(c, christoffel(mink)).is_zero());
}

TEST_CASE("property: scalar commutator equals minus torsion") {
  for (const auto& name : {"minkowski", "pp_wave_vacuum", "sphere2", "walker3"}) {
    const auto g = catalog_get(name).metric;
    const std::size_t n = g.dim();
    std::vector<Expr> args;
    for (std::size_t i = 0; i < n; ++i) args.push_back(g.chart().coord(i));
    const Expr phi = Expr::function("phi", args);
    std::vector<Torsion> cases{Torsion::zero(g.chart_ptr()), gradient(g)};
    if (n >= 3) cases.push_back(levicivita(g));
    for (const auto& tau : cases) {
      const auto conn = connection_with_torsion(g, tau);
      const Tensor d2 = covariant_derivative(covariant_derivative(Tensor::scalar(g.chart_ptr(), phi), conn), conn);
      for (int a = 0; a < int(n); ++a)
        for (int b = 0; b < int(n); ++b) {
          // d2[x][y] = grad_y grad_x phi
          Expr lhs = d2.at({b, a}) - d2.at({a, b});
          Expr rhs;
          for (std::size_t c = 0; c < n; ++c) rhs -= tau(c, a, b) * sym::differentiate(phi, g.chart().coord(c));
          CHECK_MESSAGE(same(lhs, rhs), name);
        }
    }
  }
}

TEST_CASE("curvature of catalog metrics") {
  const auto mink = make_bundle(catalog_get("minkowski").metric, 0);
  CHECK(mink.riemann.is_zero());
  CHECK(mink.weyl->is_zero());

  const auto sphere = make_bundle(catalog_get("sphere2").metric, 0);
  const Expr a = Expr::symbol("a");
  CHECK(identical(sphere.scalar, Expr(2) / (a * a)));
  CHECK_THROWS_AS(weyl(sphere), DimensionError);

  const auto pp = make_bundle(catalog_get("pp_wave_vacuum").metric, 0);
  CHECK(pp.ricci.is_zero());
  CHECK_FALSE(pp.riemann.is_zero());

  const auto sch = make_bundle(catalog_get("schwarzschild").metric, 0);
  CHECK(sch.ricci.is_zero());
  CHECK_FALSE(sch.weyl->is_zero());

  for (const auto& name : {"euclidean", "kundt_generic", "walker3"}) {
    const auto b = make_bundle(catalog_get(name).metric, 0);
    CHECK_MESSAGE(b.weyl->is_zero(), name);
  }
}

TEST_CASE("Riemann symmetries and Weyl tracelessness") {
  for (const auto& name : catalog_names()) {
    const auto e = catalog_get(name);
    const auto b = make_bundle(e.metric, 0);
    const int n = int(e.metric.dim());
    const Tensor& R = b.riemann_down;
    for_each_index(n, 4, [&](const Index& i) {
      CHECK(same(b.riemann.at({i[0], i[1], i[2], i[3]}), -b.riemann.at({i[0], i[1], i[3], i[2]})));
      CHECK(same(R.at({i[0], i[1], i[2], i[3]}), R.at({i[2], i[3], i[0], i[1]})));
    });
    if (b.weyl) {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          Expr tr;
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) tr += e.metric.inv(p, q) * b.weyl->at({p, x, q, y});
          CHECK_MESSAGE(sym::is_zero(tr), name);
        }
    }
  }
}

TEST_CASE("identity suites on every torsion-free catalog metric") {
  for (const auto& name : torsion_free_entries()) {
    const auto e = catalog_get(name);
    for (const Metric* g : {&e.metric, &e.alternate}) {
      const auto rep = check_identities(make_bundle(*g, 1));
      for (const auto& c : rep.checks) CHECK_MESSAGE(c.passed, name << ": " << c.name << " " << c.detail);
      CHECK(rep.find("first Bianchi"));
      CHECK(rep.find("second Bianchi"));
    }
  }
}

TEST_CASE("corrupted Riemann component fails first Bianchi") {
  auto b = make_bundle(catalog_get("schwarzschild").metric, 0);
  b.riemann.at({0, 1, 2, 3}) += Expr(1);
  b.riemann.at({0, 1, 3, 2}) -= Expr(1);
  const auto rep = check_identities(b);
  CHECK(rep.find("metricity")->passed);
  CHECK_FALSE(rep.find("first Bianchi")->passed);
  CHECK_FALSE(rep.all_passed());
}

TEST_CASE("torsional identity suites") {
  for (const auto& name : {"minkowski", "pp_wave_vacuum"}) {
    const auto g = catalog_get(name).metric;
    for (const Torsion& tau : {gradient(g), levicivita(g)}) {
      const auto rep = check_identities(make_bundle(g, connection_with_torsion(g, tau), 0));
      CHECK(rep.find("metricity")->passed);
      REQUIRE(rep.find("torsional Jacobi"));
      CHECK_MESSAGE(rep.find("torsional Jacobi")->passed, rep.find("torsional Jacobi")->detail);
      CHECK_MESSAGE(rep.all_passed(), name);
    }
  }
}

TEST_CASE("property: 2D Riemann is fixed by the Ricci scalar") {
  auto ch = make_chart({"x", "y"});
  const Expr x = ch->coord(0), y = ch->coord(1);
  testing::ExprGen gen({x, y}, 31);
  int done = 0;
  while (done < 3) {
    // Diagonally dominant at small coordinates: random terms plus a constant shift.
    Matrix g{{Expr(3) + gen(1) * x, gen(1) * y}, {Expr(), Expr(4) + gen(1) * y}};
    g[1][0] = g[0][1];
    try {
      const Metric m(ch, g, Signature{2, 0});
      const auto b = make_bundle(m, 0);
      bool ok = true;
      for_each_index(2, 4, [&](const Index& i) {
        const Expr model = b.scalar / 2 * (m(i[0], i[2]) * m(i[1], i[3]) - m(i[0], i[3]) * m(i[1], i[2]));
        ok = ok && sym::is_zero(b.riemann_down.at({i[0], i[1], i[2], i[3]}) - model);
      });
      CHECK(ok);
      ++done;
    } catch (const DegenerateMetricError&) {
    }
  }
}

TEST_CASE("numeric cross-validation of Christoffel and Riemann components") {
  struct Case {
    Metric g;
    std::map<std::string, long double> params;
    testing::Point at;
  };
  std::vector<Case> cases{{catalog_get("schwarzschild").metric, {{"M", 1}}, {0.3L, 3.7L, 1.1L, 0.4L}},
                          {testing::concrete_pp_wave(), {}, {0.6L, -0.2L, 0.8L, 0.35L}}};
  for (const auto& c : cases) {
    const std::size_t n = c.g.dim();
    const testing::NumericCurvature num(testing::numeric_metric(c.g, c.params), n);
    const auto Gn = num.christoffel(c.at);
    const auto Rn = num.riemann(c.at);
    const auto b = make_bundle(c.g, 0);
    auto values = c.params;
    for (std::size_t i = 0; i < n; ++i) values[c.g.chart().name(i)] = c.at[i];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
          CHECK(testing::close(sym::evaluate(b.connection(a, p, q), values), Gn[a][p][q]));
          for (std::size_t r = 0; r < n; ++r) {
            const long double exact = sym::evaluate(b.riemann.at({int(a), int(p), int(q), int(r)}), values);
            CHECK(testing::close(exact, Rn[((a * n + p) * n + q) * n + r], 1e-5L, 1e-7L));
          }
        }
  }
}
