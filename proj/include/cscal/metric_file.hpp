#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cscal/catalog.hpp"
#include "cscal/invariants.hpp"
#include "cscal/symbolic/parser.hpp"

namespace cscal {

// Text format, one statement per line, '#' starts a comment:
//
//   coordinates: u, v, x, y
//   signature: -+++
//   parameters: M              (optional)
//   functions: f(u), H(u,x,y)  (optional)
//   torsion: gradient psi      (optional; ansatz kind, then test function names)
//   g[u,u] = (x^2 - y^2)*f(u)
//   g[u,v] = 1
//
// Components not listed are zero; g[a,b] also sets g[b,a].
struct TorsionSpec {
  ProbeAnsatz ansatz = ProbeAnsatz::Gradient;
  std::vector<std::string> names;  // empty: fresh names
};

struct MetricFile {
  std::vector<std::string> coordinates;
  Signature signature;
  std::vector<std::string> parameters;
  std::vector<FunctionDecl> functions;
  std::optional<TorsionSpec> torsion;

  // Built while parsing; every component is checked against the declarations.
  std::optional<Metric> metric;
};

// Throws ParseError (with line/column) for syntax and declaration problems,
// and MathError for a degenerate or inconsistent metric.
MetricFile parse_metric_file(std::string_view text);
MetricFile load_metric_file(const std::string& path);
// Names declared by the file, for parsing further expressions (e.g. vector fields).
sym::ParseContext parse_context(const MetricFile& f);

// Function symbols of g with argument names, in presentation order. Arguments
// that are not plain coordinates get positional names a1, a2, ...
std::vector<FunctionDecl> function_decls(const Metric& g);

std::string write_metric_file(const Metric& g, const std::vector<std::string>& parameters,
                              const std::vector<FunctionDecl>& functions,
                              const std::optional<TorsionSpec>& torsion = std::nullopt,
                              const std::string& header = {});
std::string write_metric_file(const CatalogEntry& e, bool alternate = false);

}  // namespace cscal
