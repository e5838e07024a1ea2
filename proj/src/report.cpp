#include "cscal/report.hpp"

#include <sstream>

namespace cscal {

using nlohmann::json;

namespace {

json metric_json(const MetricSummary& m) {
  json j{{"source", m.source}, {"coordinates", m.coordinates}, {"signature", m.signature}, {"torsion", nullptr}};
  if (m.torsion) j["torsion"] = {{"ansatz", to_string(m.torsion->ansatz)}, {"test_functions", m.torsion->names}};
  return j;
}

std::string metric_line(const MetricSummary& m) {
  std::string s = m.source + ": coordinates (";
  for (std::size_t i = 0; i < m.coordinates.size(); ++i) s += (i ? ", " : "") + m.coordinates[i];
  s += "), signature " + m.signature;
  if (m.torsion) s += std::string(", ") + to_string(m.torsion->ansatz) + " torsion";
  return s;
}

json values_json(const InvariantReport& r) {
  json out = json::array();
  for (const auto& v : r.values) {
    out.push_back({{"name", v.name},
                   {"formula", v.formula},
                   {"order", v.order},
                   {"value", sym::to_string(v.value)},
                   {"zero", v.zero}});
  }
  return out;
}

void values_text(std::ostream& out, const InvariantReport& r, const std::string& indent = "  ") {
  std::size_t w = 0;
  for (const auto& v : r.values) w = std::max(w, v.name.size());
  for (const auto& v : r.values) {
    out << indent << v.name << std::string(w - v.name.size(), ' ') << " = " << sym::to_string(v.value) << "\n";
  }
}

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : ", ") + x;
  return out.empty() ? "(none)" : out;
}

json field_json(const CriterionReport& r) {
  std::vector<std::string> comps;
  for (const auto& c : r.field.comps) comps.push_back(sym::to_string(c));
  json geo{{"strict", r.geodesic.strict}, {"projective", r.geodesic.projective}, {"lambda", nullptr}};
  if (r.geodesic.lambda) geo["lambda"] = sym::to_string(*r.geodesic.lambda);
  json j{{"field", r.field.str()},
         {"components", comps},
         {"null", r.null},
         {"normal", r.normal},
         {"nondiverging", r.nondiverging},
         {"geodesic", geo},
         {"annihilates", nullptr},
         {"verdict", to_string(r.verdict)}};
  if (r.annihilates) {
    j["annihilates"] = *r.annihilates;
    j["annihilation_order"] = r.annihilation_order;
  }
  return j;
}

void field_text(std::ostream& out, const CriterionReport& r) {
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  out << "  " << r.field.str() << ": " << to_string(r.verdict) << "\n"
      << "    null " << yn(r.null) << ", normal " << yn(r.normal) << ", non-diverging " << yn(r.nondiverging)
      << ", geodesic " << (r.geodesic.strict ? "yes" : r.geodesic.projective ? "up to reparametrization" : "no")
      << "\n";
  if (r.annihilates) {
    out << "    annihilates invariants up to order " << r.annihilation_order << ": " << yn(*r.annihilates) << "\n";
  }
}

}  // namespace

MetricSummary summarize(const Metric& g, const std::string& source, const std::optional<TorsionSpec>& t) {
  return {source, g.chart().names(), g.signature().str(), t};
}

json invariants_json(const MetricSummary& m, const InvariantReport& r, const std::set<std::string>& phantoms) {
  std::set<std::string> fns = r.functions;
  return {{"command", "invariants"},   {"metric", metric_json(m)},      {"order", r.order},
          {"invariants", values_json(r)}, {"all_zero", r.all_zero()}, {"functions", fns},
          {"phantoms", phantoms}};
}

std::string invariants_text(const MetricSummary& m, const InvariantReport& r, const std::set<std::string>& phantoms) {
  std::ostringstream out;
  out << metric_line(m) << "\n";
  out << "invariants up to derivative order " << r.order << ":\n";
  values_text(out, r);
  out << "functions in invariants: " << join(r.functions) << "\n";
  if (!phantoms.empty()) {
    out << "warning: phantom functions (absent from every invariant up to order " << r.order
        << "): " << join(phantoms) << "\n";
  }
  return out.str();
}

json criterion_json(const MetricSummary& m, const std::vector<CriterionReport>& fields, bool searched) {
  json fs = json::array();
  bool any = false;
  for (const auto& f : fields) {
    fs.push_back(field_json(f));
    any = any || f.verdict == CriterionVerdict::CandidateDegenerate;
  }
  return {{"command", "criterion"},
          {"metric", metric_json(m)},
          {"searched", searched},
          {"fields", fs},
          {"verdict", to_string(any ? CriterionVerdict::CandidateDegenerate : CriterionVerdict::Negative)}};
}

std::string criterion_text(const MetricSummary& m, const std::vector<CriterionReport>& fields, bool searched) {
  std::ostringstream out;
  out << metric_line(m) << "\n";
  bool any = false;
  if (searched) out << "null congruence search: " << fields.size() << " candidate field(s)\n";
  for (const auto& f : fields) {
    field_text(out, f);
    any = any || f.verdict == CriterionVerdict::CandidateDegenerate;
  }
  out << "verdict: " << to_string(any ? CriterionVerdict::CandidateDegenerate : CriterionVerdict::Negative) << "\n";
  return out.str();
}

json classify_json(const MetricSummary& m, const Classification& c) {
  json cands = json::array();
  for (const auto& f : c.candidates) cands.push_back(field_json(f));
  json j{{"command", "classify"}, {"metric", metric_json(m)}, {"order", c.order},
         {"candidates", cands},   {"invariants", nullptr},     {"phantoms", c.phantoms},
         {"verdict", to_string(c.verdict)}, {"reason", c.reason}};
  if (c.invariants) j["invariants"] = values_json(*c.invariants);
  return j;
}

std::string classify_text(const MetricSummary& m, const Classification& c) {
  std::ostringstream out;
  out << metric_line(m) << "\n";
  out << "candidate fields: " << c.candidates.size() << "\n";
  for (const auto& f : c.candidates) field_text(out, f);
  if (c.invariants) {
    out << "invariants up to derivative order " << c.order << ":\n";
    values_text(out, *c.invariants);
    out << "phantom functions: " << join(c.phantoms) << "\n";
  }
  out << "verdict: " << to_string(c.verdict) << " (" << c.reason << ")\n";
  return out.str();
}

json probe_json(const MetricSummary& a, const MetricSummary& b, ProbeAnsatz ansatz, int order, const ProbeResult& r) {
  return {{"command", "probe"},
          {"ansatz", to_string(ansatz)},
          {"order", order},
          {"first", {{"metric", metric_json(a)}, {"invariants", values_json(r.first)}}},
          {"second", {{"metric", metric_json(b)}, {"invariants", values_json(r.second)}}},
          {"reasons", r.reasons},
          {"verdict", r.verdict == ProbeVerdict::Distinguished ? "DISTINGUISHED"
                                                               : "INCONCLUSIVE-AT-ORDER-" + std::to_string(order)}};
}

std::string probe_text(const MetricSummary& a, const MetricSummary& b, ProbeAnsatz ansatz, int order,
                       const ProbeResult& r) {
  std::ostringstream out;
  out << "torsion probe, " << to_string(ansatz) << " ansatz, invariants up to order " << order << "\n";
  out << "first  " << metric_line(a) << "\n";
  values_text(out, r.first, "    ");
  out << "second " << metric_line(b) << "\n";
  values_text(out, r.second, "    ");
  for (const auto& s : r.reasons) out << "  " << s << "\n";
  if (r.verdict == ProbeVerdict::Distinguished) {
    out << "verdict: DISTINGUISHED\n";
  } else {
    out << "verdict: INCONCLUSIVE-AT-ORDER-" << order << " (no equivalence is claimed)\n";
  }
  return out.str();
}

json catalog_json(const std::vector<CatalogEntry>& entries) {
  json es = json::array();
  for (const auto& e : entries) {
    es.push_back({{"name", e.name},
                  {"description", e.description},
                  {"dimension", e.metric.dim()},
                  {"signature", e.metric.signature().str()},
                  {"flat", e.flat},
                  {"vacuum", e.vacuum},
                  {"vsi", e.vsi},
                  {"kundt", e.kundt}});
  }
  return {{"command", "catalog"}, {"entries", es}};
}

std::string catalog_text(const std::vector<CatalogEntry>& entries) {
  std::ostringstream out;
  std::size_t w = 0;
  for (const auto& e : entries) w = std::max(w, e.name.size());
  for (const auto& e : entries) {
    std::string tags;
    if (e.flat) tags += " flat";
    if (e.vacuum) tags += " vacuum";
    if (e.vsi) tags += " vsi";
    if (e.kundt) tags += " kundt";
    out << e.name << std::string(w - e.name.size(), ' ') << "  n=" << e.metric.dim() << " "
        << e.metric.signature().str() << "  " << e.description;
    if (!tags.empty()) out << "  [" << tags.substr(1) << "]";
    out << "\n";
  }
  return out.str();
}

}  // namespace cscal
