#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "cscal/criterion.hpp"
#include "cscal/metric_file.hpp"

namespace cscal {

// What a report says about its input metric.
struct MetricSummary {
  std::string source;  // file name or catalog entry
  std::vector<std::string> coordinates;
  std::string signature;
  std::optional<TorsionSpec> torsion;
};

MetricSummary summarize(const Metric& g, const std::string& source, const std::optional<TorsionSpec>& t = {});

nlohmann::json invariants_json(const MetricSummary& m, const InvariantReport& r, const std::set<std::string>& phantoms);
std::string invariants_text(const MetricSummary& m, const InvariantReport& r, const std::set<std::string>& phantoms);

// `searched`: fields came from search_null_congruence rather than the user.
nlohmann::json criterion_json(const MetricSummary& m, const std::vector<CriterionReport>& fields, bool searched);
std::string criterion_text(const MetricSummary& m, const std::vector<CriterionReport>& fields, bool searched);

nlohmann::json classify_json(const MetricSummary& m, const Classification& c);
std::string classify_text(const MetricSummary& m, const Classification& c);

nlohmann::json probe_json(const MetricSummary& a, const MetricSummary& b, ProbeAnsatz ansatz, int order,
                          const ProbeResult& r);
std::string probe_text(const MetricSummary& a, const MetricSummary& b, ProbeAnsatz ansatz, int order,
                       const ProbeResult& r);

nlohmann::json catalog_json(const std::vector<CatalogEntry>& entries);
std::string catalog_text(const std::vector<CatalogEntry>& entries);

}  // namespace cscal
