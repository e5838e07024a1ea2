#include "cscal/symbolic/parser.hpp"

#include <algorithm>
#include <cctype>

#include "cscal/error.hpp"

namespace cscal::sym {

namespace {

enum class Tok { Number, Ident, Op, End };

struct Token {
  Tok kind;
  std::string text;
  int col;
};

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx, int line, int column)
      : ctx_(ctx), line_(line), col0_(column) {
    lex(text);
  }

  Expr parse() {
    Expr e = expression();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const ParseContext& ctx_;
  int line_;
  int col0_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, peek().col); }
  [[noreturn]] void fail_at(const std::string& msg, int col) const { throw ParseError(msg, line_, col0_ + col); }

  void lex(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
      const char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(s[i + 1]))) {
        std::size_t j = i;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
        toks_.push_back({Tok::Number, std::string(s.substr(i, j - i)), static_cast<int>(i)});
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        toks_.push_back({Tok::Ident, std::string(s.substr(i, j - i)), static_cast<int>(i)});
        i = j;
      } else if (std::string_view("+-*/^(),[]").find(c) != std::string_view::npos) {
        toks_.push_back({Tok::Op, std::string(1, c), static_cast<int>(i)});
        ++i;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col0_ + static_cast<int>(i));
      }
    }
    toks_.push_back({Tok::End, "end of input", static_cast<int>(s.size())});
  }

  const Token& peek() const { return toks_[pos_]; }
  bool at_op(char c) const { return peek().kind == Tok::Op && peek().text[0] == c; }
  bool accept(char c) {
    if (!at_op(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "' but found '" + peek().text + "'");
  }

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e += term();
      } else if (accept('-')) {
        e -= term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e *= unary();
      } else if (at_op('/')) {
        const int col = peek().col;
        ++pos_;
        Expr d = unary();
        if (d.is_structural_zero()) fail_at("division by zero", col);
        e /= d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!at_op('^')) return base;
    const int col = toks_[pos_ + 1].col;
    ++pos_;
    Expr ex = at_op('-') ? unary() : power();  // right associative
    if (!ex.is_rational()) fail_at("exponent must be a rational constant", col);
    const Rational q = ex.rational_value();
    if (q.get_den() != 1 && q.get_den() != 2) fail_at("exponent must be an integer or half-integer", col);
    if (!q.get_num().fits_sint_p()) fail_at("exponent too large", col);
    const int num = static_cast<int>(q.get_num().get_si());
    if (q.get_den() == 1) {
      if (num < 0 && base.is_structural_zero()) fail_at("division by zero", col);
      return pow(base, num);
    }
    return pow(sqrt(base), num);
  }

  std::vector<Expr> arguments() {
    std::vector<Expr> args;
    expect('(');
    if (!accept(')')) {
      do {
        args.push_back(expression());
      } while (accept(','));
      expect(')');
    }
    return args;
  }

  Rational number(const Token& t) {
    const auto dot = t.text.find('.');
    if (dot == std::string::npos) return Rational(t.text);
    if (t.text.find('.', dot + 1) != std::string::npos) fail_at("malformed number '" + t.text + "'", t.col);
    const std::string digits = t.text.substr(0, dot) + t.text.substr(dot + 1);
    mpz_class den = 1;
    for (std::size_t i = dot + 1; i < t.text.size(); ++i) den *= 10;
    Rational r(mpz_class(digits.empty() ? "0" : digits), den);
    r.canonicalize();
    return r;
  }

  bool is_coordinate(const std::string& n) const {
    return std::find(ctx_.coordinates.begin(), ctx_.coordinates.end(), n) != ctx_.coordinates.end();
  }
  bool is_parameter(const std::string& n) const {
    return std::find(ctx_.parameters.begin(), ctx_.parameters.end(), n) != ctx_.parameters.end();
  }

  Expr coordinate_symbol(const Expr& e, int col) {
    auto id = e.as_atom();
    if (!id || atom_info(*id).kind != AtomKind::Symbol) fail_at("expected a coordinate", col);
    const std::string& n = atom_info(*id).name;
    if (!ctx_.allow_undeclared && !is_coordinate(n)) throw ParseError("unknown coordinate '" + n + "'", line_, col0_ + col);
    return e;
  }

  Expr apply_function(const std::string& name, std::vector<Expr> args, int col) {
    if (auto it = ctx_.functions.find(name); it != ctx_.functions.end()) {
      if (args.size() != it->second) {
        fail_at("function '" + name + "' expects " + std::to_string(it->second) + " arguments, got " +
                    std::to_string(args.size()),
                col);
      }
    } else if (!ctx_.allow_undeclared) {
      fail_at("undeclared function '" + name + "'", col);
    }
    return Expr::function(name, std::move(args));
  }

  Expr primary() {
    const Token t = peek();
    if (t.kind == Tok::Number) {
      ++pos_;
      return Expr(number(t));
    }
    if (accept('(')) {
      Expr e = expression();
      expect(')');
      return e;
    }
    if (t.kind != Tok::Ident) fail("unexpected '" + t.text + "'");
    ++pos_;
    const std::string& name = t.text;
    static const char* const kBuiltins[] = {"sin", "cos", "exp", "log", "sqrt"};
    if (std::find(std::begin(kBuiltins), std::end(kBuiltins), name) != std::end(kBuiltins) && at_op('(')) {
      auto args = arguments();
      if (args.size() != 1) fail_at(name + " takes one argument", t.col);
      if (name == "sin") return sin(args[0]);
      if (name == "cos") return cos(args[0]);
      if (name == "exp") return exp(args[0]);
      if (name == "sqrt") return sqrt(args[0]);
      if (args[0].is_structural_zero()) fail_at("log of zero", t.col);
      return log(args[0]);
    }
    if (name == "diff" && at_op('(')) {
      expect('(');
      Expr e = expression();
      while (accept(',')) {
        const int col = peek().col;
        e = differentiate(e, coordinate_symbol(expression(), col));
      }
      expect(')');
      return e;
    }
    if (name == "D" && at_op('[')) {
      ++pos_;
      std::vector<int> slots;
      do {
        const Token s = peek();
        if (s.kind != Tok::Number || s.text.find('.') != std::string::npos) fail("expected slot number");
        ++pos_;
        slots.push_back(std::stoi(s.text));
      } while (accept(','));
      expect(']');
      expect('(');
      const Token f = peek();
      if (f.kind != Tok::Ident) fail("expected function name");
      ++pos_;
      expect(')');
      auto args = arguments();
      apply_function(f.text, args, f.col);  // arity check
      std::vector<int> orders(args.size(), 0);
      for (int s : slots) {
        if (s < 1 || s > static_cast<int>(args.size())) fail_at("derivative slot out of range", f.col);
        ++orders[s - 1];
      }
      return Expr::derivative(f.text, std::move(args), std::move(orders));
    }
    if (at_op('(')) return apply_function(name, arguments(), t.col);
    if (ctx_.functions.count(name)) fail_at("function '" + name + "' used without arguments", t.col);
    if (!ctx_.allow_undeclared && !is_coordinate(name) && !is_parameter(name)) {
      fail_at("undeclared identifier '" + name + "'", t.col);
    }
    return Expr::symbol(name);
  }
};

}  // namespace

Expr parse_expr(std::string_view text, const ParseContext& ctx, int line, int column) {
  return Parser(text, ctx, line, column).parse();
}

}  // namespace cscal::sym
