#include "cscal/catalog.hpp"

#include "cscal/criterion.hpp"
#include "cscal/error.hpp"
#include "cscal/symbolic/parser.hpp"

namespace cscal {

namespace {

using sym::Rational;

Matrix zeros(std::size_t n) { return Matrix(n, std::vector<Expr>(n)); }

std::vector<std::string> cartesian_names(std::size_t n, bool with_time) {
  static const char* const kSpace[] = {"x", "y", "z", "w", "s", "q", "p"};
  std::vector<std::string> names;
  if (with_time) names.push_back("t");
  for (std::size_t i = 0; names.size() < n; ++i) {
    if (i < std::size(kSpace)) {
      names.push_back(kSpace[i]);
    } else {
      names.push_back("x" + std::to_string(i));
    }
  }
  return names;
}

std::vector<Expr> coords(const Chart& c) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < c.dim(); ++i) out.push_back(c.coord(i));
  return out;
}

CatalogEntry minkowski(const CatalogParams& p) {
  const std::size_t n = p.n ? p.n : 4;
  if (n < 2) throw InputError("minkowski needs n >= 2");
  std::string sig = p.signature.empty() ? "-" + std::string(n - 1, '+') : p.signature;
  if (sig.size() != n) throw InputError("signature length must equal n");
  const Signature s = Signature::parse(sig);
  if (s.plus == 0 || s.minus == 0) throw InputError("minkowski needs an indefinite signature");
  auto names = cartesian_names(n, true);
  auto ch = make_chart(names);
  Matrix g = zeros(n);
  for (std::size_t i = 0; i < n; ++i) g[i][i] = Expr(sig[i] == '-' ? -1 : 1);
  Metric primary(ch, g, s);
  // Alternate: null coordinates on the first timelike/spacelike pair.
  std::size_t a = sig.find('-'), b = sig.find('+');
  if (a > b) std::swap(a, b);
  auto alt_names = names;
  alt_names[a] = "U";
  alt_names[b] = "V";
  auto alt = make_chart(alt_names);
  const Expr U = alt->coord(a), V = alt->coord(b);
  const Expr half(Rational(1, 2));
  std::map<std::string, Expr> x_of_X;
  // time = (U+V)/2, space = (V-U)/2 for the pair (time, space) in chart order
  const bool time_first = sig[a] == '-';
  x_of_X[names[a]] = time_first ? half * (U + V) : half * (V - U);
  x_of_X[names[b]] = time_first ? half * (V - U) : half * (U + V);
  Metric alternate = pullback(primary, alt, x_of_X);
  const Expr t = ch->coord(time_first ? a : b), x = ch->coord(time_first ? b : a);
  std::map<std::string, Expr> back{{alt_names[a], time_first ? t - x : x - t}, {alt_names[b], t + x}};
  if (!time_first) back = {{alt_names[a], t - x}, {alt_names[b], t + x}};
  CatalogEntry e{"minkowski", "flat space of signature " + sig, {}, {}, primary, alternate, back};
  e.flat = e.vacuum = e.vsi = true;
  return e;
}

CatalogEntry euclidean(const CatalogParams& p) {
  const std::size_t n = p.n ? p.n : 3;
  auto names = cartesian_names(n, false);
  auto ch = make_chart(names);
  Matrix g = zeros(n);
  for (std::size_t i = 0; i < n; ++i) g[i][i] = Expr(1);
  Metric primary(ch, g, Signature{static_cast<int>(n), 0});
  auto alt_names = names;
  alt_names[0] = "X";
  alt_names[1] = "Y";
  auto alt = make_chart(alt_names);
  const Expr X = alt->coord(0), Y = alt->coord(1);
  Metric alternate = pullback(primary, alt, {{names[0], X + Y * Y}, {names[1], Y}});
  const Expr x = ch->coord(0), y = ch->coord(1);
  CatalogEntry e{"euclidean", "flat Euclidean space", {}, {}, primary, alternate, {{"X", x - y * y}, {"Y", y}}};
  e.flat = e.vacuum = e.vsi = true;
  return e;
}

CatalogEntry sphere2(const CatalogParams&) {
  auto ch = make_chart({"th", "ph"});
  const Expr a = Expr::symbol("a");
  const Expr th = ch->coord(0);
  Matrix g = zeros(2);
  g[0][0] = a * a;
  g[1][1] = a * a * sym::pow(sym::sin(th), 2);
  Metric primary(ch, g, Signature{2, 0});
  auto alt = make_chart({"th", "ps"});
  Metric alternate = pullback(primary, alt, {{"ph", alt->coord(1) + alt->coord(0)}});
  CatalogEntry e{"sphere2", "round 2-sphere of radius a", {"a"}, {}, primary, alternate,
                 {{"ps", ch->coord(1) - ch->coord(0)}}};
  return e;
}

CatalogEntry schwarzschild(const CatalogParams&) {
  auto ch = make_chart({"t", "r", "th", "ph"});
  const Expr M = Expr::symbol("M");
  const Expr r = ch->coord(1), th = ch->coord(2);
  const Expr f = Expr(1) - Expr(2) * M / r;
  Matrix g = zeros(4);
  g[0][0] = -f;
  g[1][1] = Expr(1) / f;
  g[2][2] = r * r;
  g[3][3] = r * r * sym::pow(sym::sin(th), 2);
  Metric primary(ch, g, Signature{3, 1});
  auto alt = make_chart({"T", "r", "th", "ph"});
  Metric alternate = pullback(primary, alt, {{"t", alt->coord(0) + alt->coord(1) * alt->coord(1)}});
  CatalogEntry e{"schwarzschild", "Schwarzschild exterior of mass M", {"M"}, {}, primary, alternate,
                 {{"T", ch->coord(0) - r * r}}};
  e.vacuum = true;
  return e;
}

// 2 du dv + H du^2 + dx^2 + dy^2 with alternate v = V + x^2
CatalogEntry pp_wave(std::string name, std::string description, const Expr& H, std::vector<FunctionDecl> fns,
                     const ChartPtr& ch) {
  Matrix g = zeros(4);
  g[0][0] = H;
  g[0][1] = g[1][0] = Expr(1);
  g[2][2] = g[3][3] = Expr(1);
  Metric primary(ch, g, Signature{3, 1});
  auto alt = make_chart({"u", "V", "x", "y"});
  Metric alternate = pullback(primary, alt, {{"v", alt->coord(1) + alt->coord(2) * alt->coord(2)}});
  const Expr x = ch->coord(2);
  CatalogEntry e{std::move(name), std::move(description), {}, std::move(fns), primary, alternate,
                 {{"V", ch->coord(1) - x * x}}};
  e.kundt = e.vsi = true;
  return e;
}

CatalogEntry pp_wave_vacuum(const CatalogParams& p) {
  auto ch = make_chart({"u", "v", "x", "y"});
  const Expr u = ch->coord(0), x = ch->coord(2), y = ch->coord(3);
  Expr H;
  std::vector<FunctionDecl> fns;
  if (p.profile.empty()) {
    H = (x * x - y * y) * Expr::function("f", {u});
    fns.push_back({"f", {"u"}});
  } else {
    sym::ParseContext ctx;
    ctx.coordinates = {"u", "x", "y"};
    ctx.allow_undeclared = true;
    H = sym::parse_expr(p.profile, ctx);
    for (const auto& s : sym::free_symbols(H)) {
      if (s != "u" && s != "x" && s != "y") throw InputError("profile may only depend on u, x, y (found '" + s + "')");
    }
    for (const auto& f : sym::free_functions(H)) fns.push_back({f, {}});
    const Expr lap = sym::differentiate(sym::differentiate(H, x), x) + sym::differentiate(sym::differentiate(H, y), y);
    if (!sym::is_zero(lap)) throw ConstraintViolation("pp-wave profile is not harmonic in (x,y)");
  }
  auto e = pp_wave("pp_wave_vacuum", "vacuum plane-fronted wave, H = " + sym::to_string(H), H, fns, ch);
  e.vacuum = true;
  return e;
}

CatalogEntry pp_wave_general(const CatalogParams&) {
  auto ch = make_chart({"u", "v", "x", "y"});
  const Expr H = Expr::function("H", {ch->coord(0), ch->coord(2), ch->coord(3)});
  return pp_wave("pp_wave_general", "plane-fronted wave with free profile H(u,x,y)", H, {{"H", {"u", "x", "y"}}}, ch);
}

CatalogEntry kundt_generic(const CatalogParams& p) {
  const std::size_t n = p.n ? p.n : 3;
  if (n < 3) throw InputError("kundt_generic needs n >= 3");
  std::vector<std::string> names{"u", "v"};
  auto rest = cartesian_names(n - 2, false);
  names.insert(names.end(), rest.begin(), rest.end());
  auto ch = make_chart(names);
  const auto all = coords(*ch);
  std::vector<Expr> transverse{ch->coord(0)};
  std::vector<std::string> transverse_names{"u"};
  for (std::size_t i = 2; i < n; ++i) {
    transverse.push_back(ch->coord(i));
    transverse_names.push_back(names[i]);
  }
  std::vector<FunctionDecl> fns{{"A", names}};
  const Expr A = Expr::function("A", all);
  std::vector<Expr> B;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::string bn = "B" + std::to_string(k + 1);
    B.push_back(Expr::function(bn, all));
    fns.push_back({bn, names});
  }
  // gamma_ij(u, x) is v-independent, so det gamma is too.
  Matrix gamma(n - 2, std::vector<Expr>(n - 2));
  for (std::size_t i = 0; i + 2 < n; ++i) {
    for (std::size_t j = i; j + 2 < n; ++j) {
      const std::string gn = "G" + std::to_string(i + 1) + std::to_string(j + 1);
      gamma[i][j] = gamma[j][i] = Expr::function(gn, transverse);
      fns.push_back({gn, transverse_names});
    }
  }
  Metric primary = construct_kundt_metric(ch, A, B, gamma, Signature{static_cast<int>(n) - 1, 1});
  auto alt_names = names;
  alt_names[1] = "V";
  auto alt = make_chart(alt_names);
  Metric alternate = pullback(primary, alt, {{"v", alt->coord(1) + alt->coord(0) * alt->coord(0)}});
  CatalogEntry e{"kundt_generic", "Kundt form with free A, B_k and v-independent gamma", {}, fns, primary, alternate,
                 {{"V", ch->coord(1) - ch->coord(0) * ch->coord(0)}}};
  e.kundt = true;
  return e;
}

CatalogEntry walker3(const CatalogParams&) {
  auto ch = make_chart({"u", "v", "x"});
  const Expr f = Expr::function("f", {ch->coord(0), ch->coord(2)});
  Matrix g = zeros(3);
  g[0][0] = f;
  g[0][1] = g[1][0] = Expr(1);
  g[2][2] = Expr(1);
  Metric primary(ch, g, Signature{2, 1});
  auto alt = make_chart({"u", "v", "X"});
  Metric alternate = pullback(primary, alt, {{"x", alt->coord(2) + alt->coord(0)}});
  CatalogEntry e{"walker3", "3D Walker-type metric 2 du dv + f(u,x) du^2 + dx^2", {}, {{"f", {"u", "x"}}}, primary,
                 alternate, {{"X", ch->coord(2) - ch->coord(0)}}};
  e.kundt = e.vsi = true;
  return e;
}

}  // namespace

Metric pullback(const Metric& g, ChartPtr alternate, const std::map<std::string, Expr>& x_of_X) {
  const std::size_t n = g.dim();
  if (alternate->dim() != n) throw DimensionError("pullback needs charts of equal dimension");
  std::vector<Expr> x(n);
  sym::Substitution sub;
  for (std::size_t a = 0; a < n; ++a) {
    const std::string& name = g.chart().name(a);
    auto it = x_of_X.find(name);
    if (it != x_of_X.end()) {
      x[a] = it->second;
      sub.symbols[name] = it->second;
    } else {
      if (!alternate->contains(name)) throw InputError("pullback: no image for coordinate '" + name + "'");
      x[a] = Expr::symbol(name);
    }
  }
  // J[a][A] = dx^a/dX^A
  Matrix J(n, std::vector<Expr>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t A = 0; A < n; ++A) J[a][A] = sym::differentiate(x[a], alternate->coord(A));
  }
  Matrix gx(n, std::vector<Expr>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) gx[a][b] = sym::substitute(g(a, b), sub);
  }
  Matrix out(n, std::vector<Expr>(n));
  for (std::size_t A = 0; A < n; ++A) {
    for (std::size_t B = A; B < n; ++B) {
      Expr s;
      for (std::size_t a = 0; a < n; ++a) {
        if (J[a][A].is_structural_zero()) continue;
        for (std::size_t b = 0; b < n; ++b) {
          if (J[b][B].is_structural_zero() || gx[a][b].is_structural_zero()) continue;
          s += J[a][A] * J[b][B] * gx[a][b];
        }
      }
      out[A][B] = out[B][A] = s;
    }
  }
  return Metric(std::move(alternate), std::move(out), g.signature());
}

std::vector<std::string> catalog_names() {
  return {"minkowski", "euclidean", "sphere2", "schwarzschild", "pp_wave_vacuum", "pp_wave_general", "kundt_generic",
          "walker3"};
}

CatalogEntry catalog_get(const std::string& name, const CatalogParams& params) {
  if (name == "minkowski") return minkowski(params);
  if (name == "euclidean") return euclidean(params);
  if (name == "sphere2") return sphere2(params);
  if (name == "schwarzschild") return schwarzschild(params);
  if (name == "pp_wave_vacuum") return pp_wave_vacuum(params);
  if (name == "pp_wave_general") return pp_wave_general(params);
  if (name == "kundt_generic") return kundt_generic(params);
  if (name == "walker3") return walker3(params);
  throw InputError("unknown catalog entry '" + name + "'");
}

}  // namespace cscal
