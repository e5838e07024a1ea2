#include "cscal/metric_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cscal/error.hpp"
#include "cscal/symbolic/parser.hpp"

namespace cscal {

namespace {

struct Line {
  int number;
  std::string text;  // comment stripped
};

bool is_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

// Position-aware cursor over one line; columns are 1-based.
class Cursor {
 public:
  Cursor(const Line& l, std::size_t pos = 0) : line_(l), pos_(pos) {}

  void skip_ws() {
    while (pos_ < line_.text.size() && std::isspace(static_cast<unsigned char>(line_.text[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= line_.text.size();
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < line_.text.size() && line_.text[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < line_.text.size() &&
           (std::isalnum(static_cast<unsigned char>(line_.text[pos_])) || line_.text[pos_] == '_')) {
      ++pos_;
    }
    std::string s = line_.text.substr(start, pos_ - start);
    if (!is_ident(s)) {
      pos_ = start;
      fail("expected an identifier");
    }
    return s;
  }
  std::string rest() {
    skip_ws();
    std::string s = line_.text.substr(pos_);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
  }
  int column() const { return static_cast<int>(pos_) + 1; }
  int next_column() {
    skip_ws();
    return column();
  }
  bool starts_component() {
    skip_ws();
    std::size_t p = pos_;
    if (p >= line_.text.size() || line_.text[p] != 'g') return false;
    ++p;
    while (p < line_.text.size() && std::isspace(static_cast<unsigned char>(line_.text[p]))) ++p;
    return p < line_.text.size() && line_.text[p] == '[';
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_.number, column()); }

 private:
  const Line& line_;
  std::size_t pos_;
};

std::vector<std::string> ident_list(Cursor& c) {
  std::vector<std::string> out;
  if (c.done()) return out;
  do {
    out.push_back(c.ident());
  } while (c.accept(','));
  if (!c.done()) c.fail("unexpected text after list");
  return out;
}

std::vector<FunctionDecl> function_list(Cursor& c) {
  std::vector<FunctionDecl> out;
  if (c.done()) return out;
  do {
    FunctionDecl d{c.ident(), {}};
    c.expect('(');
    if (!c.accept(')')) {
      do {
        d.args.push_back(c.ident());
      } while (c.accept(','));
      c.expect(')');
    }
    out.push_back(std::move(d));
  } while (c.accept(','));
  if (!c.done()) c.fail("unexpected text after function list");
  return out;
}

}  // namespace

MetricFile parse_metric_file(std::string_view text) {
  std::vector<Line> lines;
  {
    std::istringstream in{std::string(text)};
    std::string s;
    int n = 0;
    while (std::getline(in, s)) {
      ++n;
      if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
      if (!s.empty() && s.back() == '\r') s.pop_back();
      lines.push_back({n, s});
    }
  }

  MetricFile f;
  std::set<std::string> seen_keys;
  std::vector<const Line*> component_lines;
  const Line* signature_line = nullptr;
  for (const auto& l : lines) {
    Cursor c(l);
    if (c.done()) continue;
    if (c.starts_component()) {
      component_lines.push_back(&l);
      continue;
    }
    const int key_col = c.next_column();
    const std::string key = c.ident();
    c.expect(':');
    if (!seen_keys.insert(key).second) throw ParseError("duplicate '" + key + "' line", l.number, key_col);
    if (key == "coordinates") {
      f.coordinates = ident_list(c);
    } else if (key == "parameters") {
      f.parameters = ident_list(c);
    } else if (key == "functions") {
      f.functions = function_list(c);
    } else if (key == "signature") {
      signature_line = &l;
      const int col = c.next_column();
      const std::string s = c.rest();
      if (s.empty() || s.find_first_not_of("+-") != std::string::npos) {
        throw ParseError("signature must be a string of '+' and '-'", l.number, col);
      }
      f.signature = Signature::parse(s);
    } else if (key == "torsion") {
      const int col = c.next_column();
      const std::string kind = c.ident();
      TorsionSpec t;
      try {
        t.ansatz = parse_ansatz(kind);
      } catch (const InputError&) {
        throw ParseError("unknown torsion ansatz '" + kind + "' (gradient or levicivita)", l.number, col);
      }
      t.names = ident_list(c);
      f.torsion = t;
    } else {
      throw ParseError("unknown key '" + key + "'", l.number, key_col);
    }
  }

  if (f.coordinates.empty()) throw ParseError("missing 'coordinates:' line", 1, 1);
  if (!signature_line) throw ParseError("missing 'signature:' line", 1, 1);
  const std::size_t n = f.coordinates.size();
  if (static_cast<std::size_t>(f.signature.plus + f.signature.minus) != n) {
    throw ParseError("signature has " + std::to_string(f.signature.plus + f.signature.minus) + " entries for " +
                         std::to_string(n) + " coordinates",
                     signature_line->number, 1);
  }

  // Namespaces must not collide.
  std::set<std::string> names;
  auto claim = [&](const std::string& s, const char* what) {
    if (!names.insert(s).second) throw InputError(std::string("name '") + s + "' declared twice (" + what + ")");
  };
  for (const auto& s : f.coordinates) claim(s, "coordinate");
  for (const auto& s : f.parameters) claim(s, "parameter");
  for (const auto& d : f.functions) claim(d.name, "function");

  const sym::ParseContext ctx = parse_context(f);

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[f.coordinates[i]] = i;

  ChartPtr chart;
  try {
    chart = make_chart(f.coordinates);
  } catch (const Error& e) {
    throw ParseError(e.what(), 1, 1);
  }
  Matrix g(n, std::vector<Expr>(n));
  std::vector<std::vector<bool>> set(n, std::vector<bool>(n, false));
  for (const Line* l : component_lines) {
    Cursor c(*l);
    const int name_col = c.next_column();
    c.ident();
    c.expect('[');
    auto coord = [&]() {
      const int col = c.next_column();
      const std::string s = c.ident();
      auto it = index.find(s);
      if (it == index.end()) throw ParseError("unknown coordinate '" + s + "'", l->number, col);
      return it->second;
    };
    const std::size_t a = coord();
    c.expect(',');
    const std::size_t b = coord();
    c.expect(']');
    c.expect('=');
    const int col = c.next_column();
    const std::string rhs = c.rest();
    if (rhs.empty()) throw ParseError("missing expression", l->number, col);
    if (set[a][b]) throw ParseError("component g[" + f.coordinates[a] + "," + f.coordinates[b] + "] given twice",
                                    l->number, name_col);
    g[a][b] = g[b][a] = sym::parse_expr(rhs, ctx, l->number, col);
    set[a][b] = set[b][a] = true;
  }
  f.metric.emplace(chart, std::move(g), f.signature);
  return f;
}

MetricFile load_metric_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_metric_file(ss.str());
}

sym::ParseContext parse_context(const MetricFile& f) {
  sym::ParseContext ctx;
  ctx.coordinates = f.coordinates;
  ctx.parameters = f.parameters;
  for (const auto& d : f.functions) ctx.functions[d.name] = d.args.size();
  return ctx;
}

std::vector<FunctionDecl> function_decls(const Metric& g) {
  std::vector<FunctionDecl> out;
  std::set<std::string> done;
  std::vector<sym::AtomId> atoms;
  for (const auto& row : g.components()) {
    for (const auto& e : row) {
      auto a = sym::free_atoms(e);
      atoms.insert(atoms.end(), a.begin(), a.end());
    }
  }
  std::sort(atoms.begin(), atoms.end(), sym::atom_less);
  for (auto id : atoms) {
    const auto& info = sym::atom_info(id);
    if (info.kind != sym::AtomKind::Function || !done.insert(info.name).second) continue;
    FunctionDecl d{info.name, {}};
    std::set<std::string> used;
    bool plain = true;
    for (const auto& arg : info.args) {
      auto atom = arg.as_atom();
      if (!atom || sym::atom_info(*atom).kind != sym::AtomKind::Symbol ||
          !used.insert(sym::atom_info(*atom).name).second) {
        plain = false;
        break;
      }
      d.args.push_back(sym::atom_info(*atom).name);
    }
    if (!plain) {
      d.args.clear();
      for (std::size_t i = 0; i < info.args.size(); ++i) d.args.push_back("a" + std::to_string(i + 1));
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::string write_metric_file(const Metric& g, const std::vector<std::string>& parameters,
                              const std::vector<FunctionDecl>& functions, const std::optional<TorsionSpec>& torsion,
                              const std::string& header) {
  std::ostringstream out;
  if (!header.empty()) {
    std::istringstream in(header);
    for (std::string l; std::getline(in, l);) out << "# " << l << "\n";
  }
  const Chart& ch = g.chart();
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  out << "coordinates: " << join(ch.names()) << "\n";
  out << "signature: " << g.signature().str() << "\n";
  if (!parameters.empty()) out << "parameters: " << join(parameters) << "\n";
  if (!functions.empty()) {
    std::vector<std::string> decl;
    for (const auto& f : functions) decl.push_back(f.name + "(" + join(f.args) + ")");
    out << "functions: " << join(decl) << "\n";
  }
  if (torsion) {
    out << "torsion: " << to_string(torsion->ansatz);
    if (!torsion->names.empty()) out << " " << join(torsion->names);
    out << "\n";
  }
  for (std::size_t a = 0; a < g.dim(); ++a) {
    for (std::size_t b = a; b < g.dim(); ++b) {
      if (g(a, b).is_structural_zero()) continue;
      out << "g[" << ch.name(a) << "," << ch.name(b) << "] = " << sym::to_string(g(a, b)) << "\n";
    }
  }
  return out.str();
}

std::string write_metric_file(const CatalogEntry& e, bool alternate) {
  const Metric& g = alternate ? e.alternate : e.metric;
  std::string header = e.name + ": " + e.description;
  if (alternate) header += " (alternate chart)";
  return write_metric_file(g, e.parameters, function_decls(g), std::nullopt, header);
}

}  // namespace cscal
