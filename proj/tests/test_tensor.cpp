#include <doctest.h>

#include <random>

#include "cscal/catalog.hpp"
#include "cscal/error.hpp"
#include "cscal/tensor/tensor.hpp"
#include "support.hpp"

using namespace cscal;
using sym::Rational;

namespace {

Matrix diag(std::initializer_list<Expr> d) {
  Matrix m(d.size(), std::vector<Expr>(d.size()));
  std::size_t i = 0;
  for (const auto& e : d) {
    m[i][i] = e;
    ++i;
  }
  return m;
}

bool zero_matrix(const Matrix& m) {
  for (const auto& row : m)
    for (const auto& e : row)
      if (!sym::is_zero(e)) return false;
  return true;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Tensor random_tensor(const ChartPtr& ch, std::vector<Variance> slots, std::mt19937& rng) {
  Tensor t(ch, std::move(slots));
  std::uniform_int_distribution<int> coef(-3, 3), pick(0, static_cast<int>(ch->dim()) - 1);
  for (auto& c : t.components()) c = Expr(coef(rng)) + Expr(coef(rng)) * ch->coord(pick(rng));
  return t;
}

}  // namespace

TEST_CASE("chart validation") {
  CHECK_THROWS_AS(make_chart({"x"}), DimensionError);
  CHECK_THROWS_AS(make_chart({"x", "x"}), InputError);
  auto ch = make_chart({"t", "x"});
  CHECK(ch->index_of("x") == 1);
  CHECK_THROWS_AS(ch->index_of("q"), UnknownCoordinateError);
}

TEST_CASE("metric inverse examples") {
  auto ch4 = make_chart({"t", "x", "y", "z"});
  Metric mink(ch4, diag({-1, 1, 1, 1}), Signature::parse("-+++"));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) CHECK(identical(mink.inv(a, b), mink(a, b)));

  auto ch2 = make_chart({"r", "p"});
  const Expr r = ch2->coord(0);
  Metric polar(ch2, diag({1, r * r}), Signature{2, 0});
  CHECK(identical(polar.inv(1, 1), Expr(1) / (r * r)));

  // Kundt block [[2A,1],[1,0]]; oracle: the product with the claimed inverse is the identity.
  auto chk = make_chart({"u", "v"});
  const Expr A = Expr::function("A", {chk->coord(0), chk->coord(1)});
  Matrix g{{2 * A, 1}, {1, 0}};
  Metric kundt(chk, g, Signature{1, 1});
  Matrix expected{{0, 1}, {1, -2 * A}};
  Matrix prod = multiply(g, expected);
  prod[0][0] -= 1;
  prod[1][1] -= 1;
  CHECK(zero_matrix(prod));
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) CHECK(sym::is_zero(kundt.inv(a, b) - expected[a][b]));
}

TEST_CASE("metric construction rejects bad input") {
  auto ch = make_chart({"x", "y"});
  const Expr x = ch->coord(0);
  CHECK_THROWS_AS(Metric(ch, Matrix{{1, 1}, {1, 1}}, Signature{2, 0}), DegenerateMetricError);
  CHECK_THROWS_AS(Metric(ch, Matrix{{1, x}, {0, 1}}, Signature{2, 0}), InputError);
  CHECK_THROWS_AS(Metric(ch, diag({1, 1}), Signature{3, 0}), Error);
}

TEST_CASE("every catalog metric satisfies g^ac g_cb = delta") {
  for (const auto& name : catalog_names()) {
    const auto e = catalog_get(name);
    for (const Metric* g : {&e.metric, &e.alternate}) {
      Matrix p = multiply(g->inverse(), g->components());
      for (std::size_t i = 0; i < g->dim(); ++i) p[i][i] -= 1;
      CHECK_MESSAGE(zero_matrix(p), name);
    }
  }
}

TEST_CASE("contraction, symmetrization and index gymnastics") {
  auto ch = make_chart({"t", "x", "y"});
  CHECK(identical(contract(kronecker(ch), 0, 1).components()[0], Expr(3)));
  CHECK_THROWS_AS(contract(metric_tensor(catalog_get("minkowski", {3, "", ""}).metric), 0, 1), SlotError);

  std::mt19937 rng(5);
  // Symmetric in slots 0,1; antisymmetrizing over three slots must vanish.
  Tensor s = random_tensor(ch, {Variance::Down, Variance::Down, Variance::Down}, rng);
  s = symmetrize(s, {0, 1});
  CHECK(antisymmetrize(s, {0, 1, 2}).is_zero());
  CHECK_FALSE(symmetrize(s, {0, 1, 2}).is_zero());

  const auto e = catalog_get("sphere2");
  Tensor v = random_tensor(e.metric.chart_ptr(), {Variance::Down, Variance::Up}, rng);
  Tensor back = lower_index(raise_index(v, 0, e.metric), 0, e.metric);
  CHECK((back - v).is_zero());
}

TEST_CASE("levi-civita tensor") {
  const auto mink = catalog_get("minkowski").metric;
  const Tensor eps = levi_civita(mink);
  CHECK(identical(eps.at({0, 1, 2, 3}), Expr(1)));
  CHECK(identical(eps.at({1, 0, 2, 3}), Expr(-1)));
  CHECK(eps.at({0, 0, 2, 3}).is_structural_zero());

  const auto sphere = catalog_get("sphere2").metric;
  const Expr a = Expr::symbol("a"), th = sphere.chart().coord(0);
  CHECK(sym::is_zero(levi_civita(sphere).at({0, 1}) - a * a * sym::sin(th)));
}

TEST_CASE("full contraction of eps with itself is (-1)^q n!") {
  auto full = [](const Metric& g) {
    const Tensor eps = levi_civita(g);
    Tensor up = eps;
    for (std::size_t s = 0; s < g.dim(); ++s) up = raise_index(up, s, g);
    Expr sum;
    for (std::size_t i = 0; i < eps.size(); ++i) sum += eps.components()[i] * up.components()[i];
    return sum;
  };
  CHECK(identical(full(catalog_get("minkowski").metric), Expr(-24)));
  CHECK(identical(full(catalog_get("minkowski", {3, "", ""}).metric), Expr(-6)));
  CHECK(identical(full(catalog_get("euclidean").metric), Expr(6)));
  CHECK(identical(full(catalog_get("euclidean", {4, "", ""}).metric), Expr(24)));
}

TEST_CASE("property: product then contraction equals brute-force summation") {
  std::mt19937 rng(11);
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("c" + std::to_string(i));
    auto ch = make_chart(names);
    for (int trial = 0; trial < 3; ++trial) {
      // T^a_b, S^c_d: contract T's up slot with S's down slot -> (b, c)
      Tensor T = random_tensor(ch, {Variance::Up, Variance::Down}, rng);
      Tensor S = random_tensor(ch, {Variance::Up, Variance::Down}, rng);
      Tensor P = contract(tensor_product(T, S), 0, 3);
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          Expr sum;
          for (std::size_t k = 0; k < n; ++k) sum += T.at({int(k), int(b)}) * S.at({int(c), int(k)});
          CHECK(identical(P.at({int(b), int(c)}), sum));
        }
      // rank 4 = rank 2 x rank 2 contracted twice
      Tensor Q = random_tensor(ch, {Variance::Up, Variance::Up}, rng);
      Tensor R = random_tensor(ch, {Variance::Down, Variance::Down}, rng);
      Tensor full = contract(contract(tensor_product(Q, R), 0, 2), 0, 1);
      Expr sum;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sum += Q.at({int(i), int(j)}) * R.at({int(i), int(j)});
      CHECK(identical(full.components()[0], sum));
    }
  }
}
