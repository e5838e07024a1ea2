#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cscal/invariants.hpp"

namespace cscal {

struct VectorField {
  ChartPtr chart;
  std::vector<Expr> comps;  // N^a

  VectorField(ChartPtr c, std::vector<Expr> n);
  static VectorField coordinate(ChartPtr c, std::size_t a);  // d/dx^a
  bool is_zero() const;
  std::string str() const;
};

bool is_null(const VectorField& N, const Metric& g);
// N_[a grad_b N_c] = 0 with the Levi-Civita connection.
bool is_normal(const VectorField& N, const Metric& g);
// n ^ dn = 0 for n_a = g_ab N^b, from coordinate partials only.
bool is_normal_forms(const VectorField& N, const Metric& g);
bool is_nondiverging(const VectorField& N, const Metric& g);

struct GeodesicResult {
  bool strict = false;      // N^b grad_b N^a = 0
  bool projective = false;  // N^b grad_b N^a = lambda N^a
  std::optional<Expr> lambda;
};
GeodesicResult is_geodesic(const VectorField& N, const Metric& g);

// N^a d_a phi = 0 for every computed invariant.
bool lie_annihilates(const VectorField& N, const InvariantReport& report);

enum class CriterionVerdict { CandidateDegenerate, Negative };
const char* to_string(CriterionVerdict v);

struct CriterionReport {
  VectorField field;
  bool null = false;
  bool normal = false;
  bool normal_forms = false;  // independent cross-check of `normal`
  bool nondiverging = false;
  GeodesicResult geodesic;          // informational
  std::optional<bool> annihilates;  // relative to a report truncated at `annihilation_order`
  int annihilation_order = 0;
  CriterionVerdict verdict = CriterionVerdict::Negative;
};

// Throws InputError for the zero field.
CriterionReport check_theorem_criterion(const Metric& g, const VectorField& N, const InvariantReport* report = nullptr);

// Heuristic, sound but incomplete: every returned field is null, normal and
// non-diverging; an empty result proves nothing. Candidates: coordinate fields,
// constant-coefficient pair combinations solving the null quadric, and
// gradients of single coordinates.
std::vector<VectorField> search_null_congruence(const Metric& g);

// 2 du (A du + dv + B_k dx^k) + gamma_ij dx^i dx^j on the chart (u, v, x^1..x^(n-2)).
// Throws ConstraintViolation when d_v det gamma != 0.
Metric construct_kundt_metric(ChartPtr chart, const Expr& A, const std::vector<Expr>& B, const Matrix& gamma,
                              Signature sig = {});
// Pattern check, first two chart coordinates taken as u and v.
bool kundt_form_check(const Metric& g);

enum class GeometryVerdict { ScalarCharacterizable, NotScalarCharacterizable };
const char* to_string(GeometryVerdict v);

struct Classification {
  std::vector<CriterionReport> candidates;
  std::optional<InvariantReport> invariants;  // computed only when candidates exist
  std::set<std::string> phantoms;
  int order = 0;
  GeometryVerdict verdict = GeometryVerdict::ScalarCharacterizable;
  std::string reason;
};

Classification classify_geometry(const Metric& g, int order);

}  // namespace cscal
