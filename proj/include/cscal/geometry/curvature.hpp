#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cscal/geometry/connection.hpp"

namespace cscal {

// R^a_bcd = d_c gamma^a_bd - d_d gamma^a_bc + gamma^a_mc gamma^m_bd - gamma^a_md gamma^m_bc
Tensor riemann(const Connection& gamma);

struct CurvatureBundle {
  std::shared_ptr<const Metric> metric;
  Connection connection;
  Tensor riemann;       // R^a_bcd
  Tensor riemann_down;  // R_abcd
  Tensor ricci;         // R_ab = R^m_amb
  Expr scalar;          // R
  std::optional<Tensor> weyl;  // C_abcd, n >= 3
  // riemann_derivs[k-1] = grad^k R_abcd (derivative slots appended), k = 1..order
  std::vector<Tensor> riemann_derivs;
  // scalar_derivs[k-1] = grad^k R, k = 1..order
  std::vector<Tensor> scalar_derivs;
  int order = 0;
};

CurvatureBundle make_bundle(const Metric& g, const Connection& gamma, int order);
CurvatureBundle make_bundle(const Metric& g, int order);  // Levi-Civita connection

Tensor ricci(const CurvatureBundle& b);
Expr ricci_scalar(const CurvatureBundle& b);
Tensor weyl(const CurvatureBundle& b);  // throws DimensionError for n < 3

struct IdentityCheck {
  std::string name;
  bool passed;
  std::string detail;  // first failing component, if any
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool all_passed() const;
  const IdentityCheck* find(const std::string& name) const;
};

// metricity; first Bianchi (torsion-free) or torsional Jacobi set; second Bianchi
// in covariant form (torsion-free) and in Cartan form (any connection).
IdentityReport check_identities(const CurvatureBundle& b);

}  // namespace cscal
