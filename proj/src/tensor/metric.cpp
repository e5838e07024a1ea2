#include "cscal/tensor/metric.hpp"

#include <bit>
#include <unordered_map>

#include "cscal/error.hpp"

namespace cscal {

Signature Signature::parse(std::string_view s) {
  Signature sig;
  for (char c : s) {
    if (c == '+') {
      ++sig.plus;
    } else if (c == '-') {
      ++sig.minus;
    } else if (c != ' ') {
      throw InputError("signature must consist of '+' and '-'");
    }
  }
  return sig;
}

std::string Signature::str() const { return std::string(minus, '-') + std::string(plus, '+'); }

namespace {

// Laplace expansion along rows, memoized on the set of remaining columns.
class Determinant {
 public:
  explicit Determinant(const Matrix& m) : m_(m), n_(m.size()) {}

  Expr value() { return expand((1u << n_) - 1); }

 private:
  const Matrix& m_;
  std::size_t n_;
  std::unordered_map<unsigned, Expr> memo_;

  Expr expand(unsigned cols) {
    if (cols == 0) return Expr(1);
    if (auto it = memo_.find(cols); it != memo_.end()) return it->second;
    const std::size_t row = n_ - static_cast<std::size_t>(std::popcount(cols));
    Expr sum;
    int position = 0;
    for (std::size_t c = 0; c < n_; ++c) {
      if (!(cols & (1u << c))) continue;
      const Expr& entry = m_[row][c];
      if (!entry.is_structural_zero()) {
        Expr minor = expand(cols & ~(1u << c));
        if (!minor.is_structural_zero()) {
          Expr t = entry * minor;
          sum += (position % 2) ? -t : t;
        }
      }
      ++position;
    }
    memo_.emplace(cols, sum);
    return sum;
  }
};

Matrix minor_matrix(const Matrix& m, std::size_t row, std::size_t col) {
  Matrix out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i == row) continue;
    std::vector<Expr> r;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j != col) r.push_back(m[i][j]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

Matrix adjugate_inverse(const Matrix& m, const Expr& det) {
  const std::size_t n = m.size();
  Matrix inv(n, std::vector<Expr>(n));
  if (n == 1) {
    inv[0][0] = Expr(1) / det;
    return inv;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Expr cof = determinant(minor_matrix(m, j, i));
      if ((i + j) % 2) cof = -cof;
      inv[i][j] = cof / det;
    }
  }
  // Symmetric input gives a symmetric inverse; fill the lower triangle by
  // computing it too when the input is not symmetric.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (identical(m[i][j], m[j][i])) {
        inv[i][j] = inv[j][i];
      } else {
        Expr cof = determinant(minor_matrix(m, j, i));
        if ((i + j) % 2) cof = -cof;
        inv[i][j] = cof / det;
      }
    }
  }
  return inv;
}

}  // namespace

Expr determinant(const Matrix& m) {
  for (const auto& row : m) {
    if (row.size() != m.size()) throw DimensionError("determinant of a non-square matrix");
  }
  if (m.size() > 16) throw DimensionError("matrix too large");
  return Determinant(m).value();
}

Matrix invert_matrix(const Matrix& m) {
  Expr det = determinant(m);
  if (sym::is_zero(det)) throw DegenerateMetricError("matrix is degenerate (determinant is zero)");
  return adjugate_inverse(m, det);
}

Metric::Metric(ChartPtr chart, Matrix g, Signature sig) : chart_(std::move(chart)), g_(std::move(g)), sig_(sig) {
  const std::size_t n = chart_->dim();
  if (g_.size() != n) throw DimensionError("metric must be " + std::to_string(n) + "x" + std::to_string(n));
  for (const auto& row : g_) {
    if (row.size() != n) throw DimensionError("metric must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (static_cast<std::size_t>(sig_.plus + sig_.minus) != n) {
    throw DimensionError("signature " + sig_.str() + " does not match dimension " + std::to_string(n));
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!sym::is_zero(g_[a][b] - g_[b][a])) {
        throw InputError("metric is not symmetric in (" + chart_->name(a) + "," + chart_->name(b) + ")");
      }
      g_[b][a] = g_[a][b];
    }
  }
  det_ = determinant(g_);
  if (sym::is_zero(det_)) throw DegenerateMetricError("metric is degenerate (det g = 0)");
  inv_ = adjugate_inverse(g_, det_);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Expr s;
      for (std::size_t c = 0; c < n; ++c) {
        if (!inv_[a][c].is_structural_zero() && !g_[c][b].is_structural_zero()) s += inv_[a][c] * g_[c][b];
      }
      if (!sym::is_zero(s - Expr(a == b ? 1 : 0))) throw MathError("metric inverse check failed at (" + chart_->name(a) + "," + chart_->name(b) + ")");
    }
  }
}

std::set<std::string> Metric::functions() const {
  std::set<std::string> out;
  for (const auto& row : g_) {
    for (const auto& e : row) {
      auto f = sym::free_functions(e);
      out.insert(f.begin(), f.end());
    }
  }
  return out;
}

Matrix invert_metric(const Metric& g) { return g.inverse(); }

}  // namespace cscal
