#include <doctest.h>

#include <algorithm>
#include <random>

#include "cscal/catalog.hpp"
#include "cscal/criterion.hpp"
#include "cscal/error.hpp"
#include "support.hpp"

using namespace cscal;
using sym::Rational;

namespace {

VectorField field(const Metric& g, std::vector<Expr> c) { return VectorField(g.chart_ptr(), std::move(c)); }

VectorField scaled(const VectorField& N, const Expr& s) {
  auto c = N.comps;
  for (auto& e : c) e = s * e;
  return VectorField(N.chart, c);
}

bool contains(const std::vector<VectorField>& fs, const std::vector<Expr>& c) {
  return std::any_of(fs.begin(), fs.end(), [&](const VectorField& f) {
    for (std::size_t a = 0; a < c.size(); ++a) {
      if (!sym::is_zero(f.comps[a] - c[a])) return false;
    }
    return true;
  });
}

}  // namespace

TEST_CASE("null fields") {
  const auto pp = catalog_get("pp_wave_vacuum").metric;
  CHECK(is_null(VectorField::coordinate(pp.chart_ptr(), 1), pp));
  CHECK_FALSE(is_null(VectorField::coordinate(pp.chart_ptr(), 0), pp));
  const auto e3 = catalog_get("euclidean").metric;
  CHECK_FALSE(is_null(field(e3, {1, 2, 3}), e3));
  CHECK(is_null(field(e3, {0, 0, 0}), e3));
  CHECK_THROWS_AS(VectorField(e3.chart_ptr(), {Expr(1)}), DimensionError);
}

TEST_CASE("normal fields, cross-checked against n ^ dn") {
  const auto e3 = catalog_get("euclidean").metric;
  const Expr x = e3.chart().coord(0), y = e3.chart().coord(1), z = e3.chart().coord(2);
  // The rigid rotation is hypersurface orthogonal: n = r^2 dth, n ^ dn = 0.
  const auto rot = field(e3, {-y, x, 0});
  CHECK(is_normal(rot, e3));
  CHECK(is_normal_forms(rot, e3));
  // Twisting fields: n = x dy + dz has n ^ dn = dx^dy^dz, and a helical rotation.
  for (const auto& twist : {field(e3, {Expr(), x, Expr(1)}), field(e3, {-y, x, Expr(1)})}) {
    CHECK_FALSE(is_normal(twist, e3));
    CHECK_FALSE(is_normal_forms(twist, e3));
  }

  // Gradient fields N^a = g^ab d_b f are always normal.
  for (const auto& name : {"schwarzschild", "sphere2", "pp_wave_vacuum", "kundt_generic"}) {
    const auto g = catalog_get(name).metric;
    std::vector<Expr> args;
    for (std::size_t i = 0; i < g.dim(); ++i) args.push_back(g.chart().coord(i));
    const Expr f = Expr::function("F", args);
    std::vector<Expr> c(g.dim());
    for (std::size_t a = 0; a < g.dim(); ++a)
      for (std::size_t b = 0; b < g.dim(); ++b) c[a] += g.inv(a, b) * sym::differentiate(f, g.chart().coord(b));
    const auto grad = field(g, c);
    CHECK_MESSAGE(is_normal(grad, g), name);
    CHECK_MESSAGE(is_normal_forms(grad, g), name);
  }
  CHECK(is_normal(field(e3, {x, y, z}), e3));
}

TEST_CASE("non-diverging fields") {
  const auto e2 = catalog_get("euclidean", {2, "", ""}).metric;
  const Expr x = e2.chart().coord(0), y = e2.chart().coord(1);
  CHECK_FALSE(is_nondiverging(field(e2, {x, y}), e2));
  const auto mink = catalog_get("minkowski").metric;
  CHECK(is_nondiverging(field(mink, {1, 2, -3, Expr(Rational(1, 2))}), mink));
  const auto k = catalog_get("kundt_generic").metric;
  CHECK(is_nondiverging(VectorField::coordinate(k.chart_ptr(), 1), k));
  // x d_x on Euclidean 2D has divergence 1.
  CHECK_FALSE(is_nondiverging(field(e2, {x, 0}), e2));
}

TEST_CASE("geodesic fields") {
  const auto pp = catalog_get("pp_wave_vacuum").metric;
  const Expr u = pp.chart().coord(0), v = pp.chart().coord(1);
  CHECK(is_geodesic(VectorField::coordinate(pp.chart_ptr(), 1), pp).strict);

  const auto ef = is_geodesic(field(pp, {0, sym::exp(Expr::function("f", {u})), 0, 0}), pp);
  CHECK(ef.strict);
  // e^v d_v: N^b grad_b N^a = e^v N^a, geodesic only up to reparametrization.
  const auto ev = is_geodesic(field(pp, {0, sym::exp(v), 0, 0}), pp);
  CHECK_FALSE(ev.strict);
  CHECK(ev.projective);
  REQUIRE(ev.lambda);
  CHECK(identical(*ev.lambda, sym::exp(v)));

  const auto e3 = catalog_get("euclidean").metric;
  const auto rot = is_geodesic(field(e3, {-e3.chart().coord(1), e3.chart().coord(0), 0}), e3);
  CHECK_FALSE(rot.strict);
  CHECK_FALSE(rot.projective);
}

TEST_CASE("annihilation of the invariant set") {
  const auto mink = catalog_get("minkowski").metric;
  const auto mrep = invariant_report(mink, 1);
  const Expr t = mink.chart().coord(0);
  CHECK(lie_annihilates(field(mink, {t * t, 1, 0, sym::sin(t)}), mrep));

  const auto pp = catalog_get("pp_wave_vacuum").metric;
  CHECK(lie_annihilates(VectorField::coordinate(pp.chart_ptr(), 1), invariant_report(pp, 2)));
  const auto k = catalog_get("kundt_generic").metric;
  const auto krep = invariant_report(k, 0);
  CHECK_FALSE(krep.all_zero());

  const auto s = catalog_get("schwarzschild").metric;
  const auto srep = invariant_report(s, 0);
  CHECK_FALSE(lie_annihilates(VectorField::coordinate(s.chart_ptr(), 1), srep));
  CHECK(lie_annihilates(VectorField::coordinate(s.chart_ptr(), 0), srep));
}

TEST_CASE("theorem criterion verdicts") {
  const auto pp = catalog_get("pp_wave_vacuum").metric;
  const auto rep = invariant_report(pp, 0);
  const auto r = check_theorem_criterion(pp, VectorField::coordinate(pp.chart_ptr(), 1), &rep);
  CHECK(r.null);
  CHECK(r.normal);
  CHECK(r.nondiverging);
  CHECK(r.geodesic.strict);
  REQUIRE(r.annihilates);
  CHECK(*r.annihilates);
  CHECK(r.verdict == CriterionVerdict::CandidateDegenerate);

  const auto s = catalog_get("schwarzschild").metric;
  const auto rs = check_theorem_criterion(s, VectorField::coordinate(s.chart_ptr(), 0));
  CHECK_FALSE(rs.null);
  CHECK(rs.verdict == CriterionVerdict::Negative);
  CHECK_FALSE(rs.annihilates);

  const auto e3 = catalog_get("euclidean").metric;
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(check_theorem_criterion(e3, VectorField::coordinate(e3.chart_ptr(), a)).verdict ==
          CriterionVerdict::Negative);
  }
  CHECK_THROWS_AS(check_theorem_criterion(e3, field(e3, {0, 0, 0})), InputError);
  CHECK_THROWS_AS(check_theorem_criterion(pp, VectorField::coordinate(e3.chart_ptr(), 0)), InputError);
}

TEST_CASE("null congruence search") {
  CHECK(search_null_congruence(catalog_get("euclidean").metric).empty());
  for (std::size_t n : {2u, 3u, 4u}) CHECK(search_null_congruence(catalog_get("euclidean", {n, "", ""}).metric).empty());
  CHECK(search_null_congruence(catalog_get("sphere2").metric).empty());

  const auto mink = catalog_get("minkowski").metric;
  const auto mf = search_null_congruence(mink);
  CHECK(contains(mf, {1, 1, 0, 0}));
  CHECK(contains(mf, {1, -1, 0, 0}));

  const auto k = catalog_get("kundt_generic").metric;
  CHECK(contains(search_null_congruence(k), {0, 1, 0}));
  const auto pp = catalog_get("pp_wave_vacuum").metric;
  CHECK(contains(search_null_congruence(pp), {0, 1, 0, 0}));

  // Soundness: every returned field passes all three checks, on every entry.
  for (const auto& name : catalog_names()) {
    const auto e = catalog_get(name);
    for (const Metric* g : {&e.metric, &e.alternate}) {
      for (const auto& f : search_null_congruence(*g)) {
        CHECK_MESSAGE((is_null(f, *g) && is_normal(f, *g) && is_nondiverging(f, *g)), name << " " << f.str());
      }
    }
  }
}

TEST_CASE("property: null and normal flags survive rescaling") {
  struct Case {
    Metric g;
    VectorField N;
  };
  const auto pp = catalog_get("pp_wave_vacuum").metric;
  const auto mink = catalog_get("minkowski").metric;
  const auto e3 = catalog_get("euclidean").metric;
  const auto s = catalog_get("schwarzschild").metric;
  const auto k = catalog_get("kundt_generic").metric;
  const Expr x = e3.chart().coord(0), y = e3.chart().coord(1);
  std::vector<Case> cases{
      {pp, VectorField::coordinate(pp.chart_ptr(), 1)},
      {pp, VectorField::coordinate(pp.chart_ptr(), 0)},
      {mink, field(mink, {1, 1, 0, 0})},
      {mink, field(mink, {1, 0, 1, 1})},
      {e3, field(e3, {-y, x, 0})},
      {e3, field(e3, {x, y, 0})},
      {s, VectorField::coordinate(s.chart_ptr(), 0)},
      {s, field(s, {1, 1, 0, 0})},
      {k, VectorField::coordinate(k.chart_ptr(), 1)},
      {k, field(k, {1, 0, 1})},
  };
  for (const auto& c : cases) {
    std::vector<Expr> args;
    for (std::size_t i = 0; i < c.g.dim(); ++i) args.push_back(c.g.chart().coord(i));
    for (const Expr& lambda : {sym::exp(Expr::function("L", args)), Expr::function("L", args), Expr(-3) * args[0]}) {
      const auto sN = scaled(c.N, lambda);
      CHECK_MESSAGE(is_null(sN, c.g) == is_null(c.N, c.g), c.N.str());
      CHECK_MESSAGE(is_normal(sN, c.g) == is_normal(c.N, c.g), c.N.str());
      CHECK_MESSAGE(is_normal_forms(sN, c.g) == is_normal(sN, c.g), c.N.str());
    }
  }
}

TEST_CASE("property: d_v on random Kundt metrics is null, normal and non-diverging") {
  std::mt19937 rng(20240611);
  auto ch = make_chart({"u", "v", "x", "y"});
  for (int i = 0; i < 20; ++i) {
    const Expr A = testing::random_function(ch, rng);
    const std::vector<Expr> B{testing::random_function(ch, rng), testing::random_function(ch, rng)};
    const Matrix gamma = testing::random_kundt_gamma(ch, rng);
    const Metric g = construct_kundt_metric(ch, A, B, gamma);
    CHECK(kundt_form_check(g));
    const auto r = check_theorem_criterion(g, VectorField::coordinate(ch, 1));
    CHECK(r.null);
    CHECK(r.normal);
    CHECK(r.nondiverging);
    CHECK(r.verdict == CriterionVerdict::CandidateDegenerate);
  }
}

TEST_CASE("Kundt constructor and recognizer") {
  auto ch = make_chart({"u", "v", "x", "y"});
  const Expr u = ch->coord(0), v = ch->coord(1), x = ch->coord(2), y = ch->coord(3);
  const Matrix id{{Expr(1), Expr()}, {Expr(), Expr(1)}};

  const Expr H = Expr::function("H", {u, x, y});
  const Metric pp = construct_kundt_metric(ch, H / 2, {Expr(), Expr()}, id);
  const auto cat = catalog_get("pp_wave_general").metric;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) CHECK(sym::is_zero(pp(a, b) - cat(a, b)));

  const Metric flat = construct_kundt_metric(ch, Expr(), {Expr(), Expr()}, id);
  CHECK(make_bundle(flat, 0).riemann.is_zero());

  const Matrix vv{{v, Expr()}, {Expr(), Expr(1) / v}};
  CHECK(kundt_form_check(construct_kundt_metric(ch, Expr(), {Expr(), Expr()}, vv)));

  const Matrix vd{{v, Expr()}, {Expr(), v}};
  CHECK_THROWS_AS(construct_kundt_metric(ch, Expr(), {Expr(), Expr()}, vd), ConstraintViolation);
  CHECK_THROWS_AS(construct_kundt_metric(ch, Expr(), {Expr()}, id), DimensionError);
  // Written out by hand, the same matrix fails the recognizer.
  Matrix m(4, std::vector<Expr>(4));
  m[0][1] = m[1][0] = Expr(1);
  m[2][2] = m[3][3] = v;
  CHECK_FALSE(kundt_form_check(Metric(ch, m, Signature{3, 1})));
  CHECK_FALSE(kundt_form_check(catalog_get("schwarzschild").metric));
  CHECK(kundt_form_check(catalog_get("kundt_generic").metric));
  CHECK(kundt_form_check(catalog_get("walker3").metric));
}

TEST_CASE("catalog flags hold at load") {
  for (const auto& name : catalog_names()) {
    const auto e = catalog_get(name);
    const auto b = make_bundle(e.metric, 0);
    if (e.flat) CHECK_MESSAGE(b.riemann.is_zero(), name);
    if (e.vacuum) CHECK_MESSAGE(b.ricci.is_zero(), name);
    if (e.kundt) CHECK_MESSAGE(kundt_form_check(e.metric), name);
    if (e.vsi) CHECK_MESSAGE(invariant_report(e.metric, 2).all_zero(), name);
  }
  CHECK_FALSE(make_bundle(catalog_get("schwarzschild").metric, 0).riemann.is_zero());
}

TEST_CASE("classification pipeline") {
  const auto e3 = classify_geometry(catalog_get("euclidean").metric, 2);
  CHECK(e3.verdict == GeometryVerdict::ScalarCharacterizable);
  CHECK(e3.candidates.empty());
  CHECK_FALSE(e3.invariants);

  const auto mink = classify_geometry(catalog_get("minkowski").metric, 2);
  CHECK(mink.verdict == GeometryVerdict::ScalarCharacterizable);
  CHECK(mink.phantoms.empty());

  const auto pp = classify_geometry(catalog_get("pp_wave_vacuum").metric, 2);
  CHECK(pp.verdict == GeometryVerdict::NotScalarCharacterizable);
  CHECK(pp.phantoms == std::set<std::string>{"f"});
  std::vector<VectorField> pc;
  for (const auto& c : pp.candidates) pc.push_back(c.field);
  CHECK(contains(pc, {0, 1, 0, 0}));
  REQUIRE(pp.invariants);
  CHECK(pp.invariants->order == 2);

  const auto s = classify_geometry(catalog_get("schwarzschild").metric, 1);
  CHECK(s.verdict == GeometryVerdict::ScalarCharacterizable);
  CHECK(s.candidates.empty());

  const auto k = classify_geometry(catalog_get("kundt_generic").metric, 2);
  std::vector<VectorField> kc;
  for (const auto& c : k.candidates) kc.push_back(c.field);
  CHECK(contains(kc, {0, 1, 0}));
}
