#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cscal/tensor/metric.hpp"

namespace cscal {

struct FunctionDecl {
  std::string name;
  std::vector<std::string> args;  // coordinate names
};

struct CatalogParams {
  std::size_t n = 0;      // dimension, 0 = entry default
  std::string signature;  // minkowski only, e.g. "+---"; empty = "-+...+"
  std::string profile;    // pp_wave_vacuum only: H(u,x,y), must be harmonic in (x,y)
};

struct CatalogEntry {
  std::string name;
  std::string description;
  std::vector<std::string> parameters;  // constant symbols
  std::vector<FunctionDecl> functions;
  Metric metric;
  // The same geometry in a second chart, and each changed alternate coordinate
  // as an expression in the primary ones: X^A(x).
  Metric alternate;
  std::map<std::string, Expr> alternate_to_primary;
  bool flat = false;
  bool vacuum = false;
  bool vsi = false;
  bool kundt = false;
};

std::vector<std::string> catalog_names();
// Throws InputError for an unknown name or bad parameters.
CatalogEntry catalog_get(const std::string& name, const CatalogParams& params = {});

// g'_AB = dx^a/dX^A dx^b/dX^B g_ab(x(X)); `x_of_X` gives every primary coordinate
// that differs from the alternate chart as an expression in alternate coordinates.
Metric pullback(const Metric& g, ChartPtr alternate, const std::map<std::string, Expr>& x_of_X);

}  // namespace cscal
