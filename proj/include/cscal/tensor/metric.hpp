#pragma once

#include <set>
#include <string>
#include <vector>

#include "cscal/tensor/chart.hpp"

namespace cscal {

using Matrix = std::vector<std::vector<Expr>>;

struct Signature {
  int plus = 0;
  int minus = 0;

  static Signature parse(std::string_view s);  // e.g. "-+++"
  std::string str() const;
  friend bool operator==(const Signature&, const Signature&) = default;
};

// Covariant metric components in a coordinate chart, with cached determinant and
// inverse. Construction checks symmetry, non-degeneracy and g^ac g_cb = delta.
class Metric {
 public:
  Metric(ChartPtr chart, Matrix g, Signature sig);

  const Chart& chart() const { return *chart_; }
  const ChartPtr& chart_ptr() const { return chart_; }
  std::size_t dim() const { return chart_->dim(); }
  const Expr& operator()(std::size_t a, std::size_t b) const { return g_[a][b]; }
  const Expr& inv(std::size_t a, std::size_t b) const { return inv_[a][b]; }
  const Matrix& components() const { return g_; }
  const Matrix& inverse() const { return inv_; }
  const Expr& det() const { return det_; }
  const Signature& signature() const { return sig_; }
  bool is_definite() const { return sig_.plus == 0 || sig_.minus == 0; }

  // Function symbols occurring in any component.
  std::set<std::string> functions() const;

 private:
  ChartPtr chart_;
  Matrix g_;
  Matrix inv_;
  Expr det_;
  Signature sig_;
};

Expr determinant(const Matrix& m);
// Exact adjugate inverse; throws DegenerateMetricError when the determinant is zero.
Matrix invert_metric(const Metric& g);
Matrix invert_matrix(const Matrix& m);

}  // namespace cscal
