#pragma once

#include <set>
#include <string>
#include <vector>

#include "cscal/geometry/curvature.hpp"

namespace cscal {

// One ingredient occurrence in a contraction pattern. Tensor names:
//   R, Ric, Riem, Weyl, eps, dR, ddR, dRiem, ddRiem
// (all covariant; derivative slots follow the tensor's own slots). Labels are
// single letters; each label appears exactly twice across the recipe and is
// contracted through the inverse metric.
struct Factor {
  std::string tensor;
  std::string labels;
};

struct InvariantRecipe {
  std::string name;
  std::string formula;  // human-readable contraction
  std::vector<Factor> factors;
  int order = 0;  // number of covariant derivatives involved
};

std::vector<InvariantRecipe> standard_invariant_set(int order, std::size_t n);

struct InvariantValue {
  std::string name;
  std::string formula;
  int order;
  Expr value;
  bool zero;
};

struct InvariantReport {
  std::vector<InvariantValue> values;  // recipe order
  std::set<std::string> functions;     // function symbols across all values
  int order = 0;                       // truncation order of the recipe set

  const InvariantValue* find(const std::string& name) const;
  bool all_zero() const;
};

// Throws InputError for malformed patterns and MathError when the bundle lacks
// the derivative order or tensor a recipe needs.
Expr evaluate_recipe(const InvariantRecipe& recipe, const CurvatureBundle& b);
InvariantReport evaluate_invariants(const std::vector<InvariantRecipe>& recipes, const CurvatureBundle& b);
// Standard set at order k on the Levi-Civita connection.
InvariantReport invariant_report(const Metric& g, int order);

// g^ab d_a phi d_b phi
Expr beltrami_first(const Expr& phi, const Metric& g);

// Metric function symbols that occur in no computed invariant.
std::set<std::string> detect_phantom_functions(const Metric& g, const InvariantReport& report);

// ------------------------------------------------------------------ torsion probe

enum class ProbeAnsatz { Gradient, LeviCivita };
enum class ProbeVerdict { Distinguished, Inconclusive };

const char* to_string(ProbeAnsatz a);
const char* to_string(ProbeVerdict v);
ProbeAnsatz parse_ansatz(const std::string& s);

// Torsion built from test functions of all chart coordinates: fresh names unless
// `names` is given (one per strictly increasing index set for the Levi-Civita
// ansatz, see probe_test_function_count). With `null_test_functions` the test
// functions are replaced by zero.
Torsion probe_torsion(const Metric& g, ProbeAnsatz ansatz, bool null_test_functions = false,
                      const std::vector<std::string>& names = {});
InvariantReport probe_report(const Metric& g, ProbeAnsatz ansatz, int order, bool null_test_functions = false,
                             const std::vector<std::string>& names = {});
std::size_t probe_test_function_count(ProbeAnsatz ansatz, std::size_t n);

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
  InvariantReport first;
  InvariantReport second;
  std::vector<std::string> reasons;  // one line per discriminating invariant
};

// Throws DimensionError when dimensions or signatures differ.
ProbeResult discriminate_with_torsion(const Metric& g1, const Metric& g2, ProbeAnsatz ansatz, int order);

}  // namespace cscal
