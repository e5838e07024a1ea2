#pragma once

#include <vector>

#include "cscal/tensor/metric.hpp"
#include "cscal/tensor/tensor.hpp"

namespace cscal {

// Components tau^a_bc, antisymmetric in (b,c).
class Torsion {
 public:
  // Validates antisymmetry; throws InputError otherwise.
  Torsion(ChartPtr chart, std::vector<Expr> comps);
  static Torsion zero(ChartPtr chart);

  const Chart& chart() const { return *chart_; }
  const ChartPtr& chart_ptr() const { return chart_; }
  std::size_t dim() const { return chart_->dim(); }
  const Expr& operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return comps_[(a * dim() + b) * dim() + c];
  }
  const std::vector<Expr>& components() const { return comps_; }
  bool is_zero() const;
  Tensor as_tensor() const;  // slots (Up, Down, Down)

 private:
  ChartPtr chart_;
  std::vector<Expr> comps_;
};

// Coefficients gamma^a_bc of a metric connection in the coordinate frame, with
// c the derivative (form) index: grad_c V^a = d_c V^a + gamma^a_bc V^b.
class Connection {
 public:
  Connection(ChartPtr chart, std::vector<Expr> comps, bool torsion_free);

  const Chart& chart() const { return *chart_; }
  const ChartPtr& chart_ptr() const { return chart_; }
  std::size_t dim() const { return chart_->dim(); }
  const Expr& operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return comps_[(a * dim() + b) * dim() + c];
  }
  const std::vector<Expr>& components() const { return comps_; }
  bool torsion_free() const { return torsion_free_; }

 private:
  ChartPtr chart_;
  std::vector<Expr> comps_;
  bool torsion_free_;
};

Connection christoffel(const Metric& g);
// gamma_amn = 1/2 (g_am,n + g_an,m - g_mn,a) - 1/2 (tau_amn + tau_mna - tau_nam)
Connection connection_with_torsion(const Metric& g, const Torsion& tau);
// tau^a_bc = gamma^a_cb - gamma^a_bc
Torsion torsion_of(const Connection& gamma);

// tau^a_bc = delta^a_b psi_,c - delta^a_c psi_,b
Torsion torsion_gradient_ansatz(const Expr& psi, ChartPtr chart);
// tau^a_bc = 1/(n-3)! eps^a_bc i1..i(n-3) Psi^(i1..i(n-3)); `psi` is the fully
// contravariant (n-3)-form (a scalar tensor when n = 3).
Torsion torsion_levicivita_ansatz(const Tensor& psi, const Metric& g);

// New derivative slot (covariant) appended last. Declared pair symmetries of the
// input are carried over and used to skip redundant components.
Tensor covariant_derivative(const Tensor& t, const Connection& gamma);

}  // namespace cscal
