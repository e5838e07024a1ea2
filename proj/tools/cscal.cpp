// cscal: curvature scalars, the degenerate-geometry criterion and the torsion probe
// for metrics given as text files (see README.md for the format).

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "cscal/error.hpp"
#include "cscal/report.hpp"

namespace {

using namespace cscal;

enum Exit { kOk = 0, kInconclusive = 1, kInputError = 2, kMathError = 3 };

struct Loaded {
  MetricFile file;
  std::string source;
};

// "catalog:NAME" loads a catalog entry with default parameters, anything else a file.
Loaded load(const std::string& spec) {
  const std::string prefix = "catalog:";
  if (spec.rfind(prefix, 0) == 0) {
    const auto e = catalog_get(spec.substr(prefix.size()));
    return {parse_metric_file(write_metric_file(e)), spec};
  }
  return {load_metric_file(spec), spec};
}

const Metric& metric(const Loaded& l) { return *l.file.metric; }

// Splits on commas outside parentheses/brackets.
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> out(1);
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw InputError("cannot write '" + out_path + "'");
  f << text;
}

std::string render(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature-scalar analysis of metrics with optional torsion"};
  app.require_subcommand(1);

  int order = -1;
  bool as_json = false;
  std::string out_path;
  std::string file, file2, field, ansatz_name;

  auto common = [&](CLI::App* sub, bool with_order) {
    if (with_order) sub->add_option("--order", order, "derivative order of the invariant set");
    sub->add_flag("--json", as_json, "machine-readable JSON report");
    sub->add_option("--out", out_path, "write the report to a file");
  };

  auto* inv = app.add_subcommand("invariants", "evaluate the standard invariant set (default order 2)");
  inv->add_option("file", file, "metric file or catalog:NAME")->required();
  common(inv, true);

  auto* crit = app.add_subcommand("criterion", "check null, normal, non-diverging vector fields");
  crit->add_option("file", file, "metric file or catalog:NAME")->required();
  crit->add_option("--field", field, "components N^a, comma separated; searched when omitted");
  common(crit, true);

  auto* cls = app.add_subcommand("classify", "candidate fields plus phantom detection (default order 2)");
  cls->add_option("file", file, "metric file or catalog:NAME")->required();
  common(cls, true);

  auto* probe = app.add_subcommand("probe", "discriminate two metrics with test torsion (default order 0)");
  probe->add_option("first", file, "metric file or catalog:NAME")->required();
  probe->add_option("second", file2, "metric file or catalog:NAME")->required();
  probe->add_option("--ansatz", ansatz_name, "gradient or levicivita");
  common(probe, true);

  auto* cat = app.add_subcommand("catalog", "built-in example metrics");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "list entries");
  cat_list->add_flag("--json", as_json, "machine-readable JSON");
  cat_list->add_option("--out", out_path, "write the list to a file");
  auto* cat_export = cat->add_subcommand("export", "write an entry in the metric file format");
  std::string entry_name;
  CatalogParams params;
  bool alternate = false;
  cat_export->add_option("name", entry_name, "entry name")->required();
  cat_export->add_option("--n", params.n, "dimension");
  cat_export->add_option("--signature", params.signature, "minkowski sign string, e.g. +---");
  cat_export->add_option("--profile", params.profile, "pp_wave_vacuum profile H(u,x,y)");
  cat_export->add_flag("--alternate", alternate, "use the entry's alternate chart");
  cat_export->add_option("--out", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*inv) {
      const auto in = load(file);
      const int k = order < 0 ? 2 : order;
      const auto& g = metric(in);
      InvariantReport rep;
      if (in.file.torsion) {
        rep = probe_report(g, in.file.torsion->ansatz, k, false, in.file.torsion->names);
      } else {
        rep = invariant_report(g, k);
      }
      const auto phantoms = detect_phantom_functions(g, rep);
      const auto m = summarize(g, in.source, in.file.torsion);
      emit(as_json ? render(invariants_json(m, rep, phantoms)) : invariants_text(m, rep, phantoms), out_path);
      return kOk;
    }
    if (*crit) {
      const auto in = load(file);
      const auto& g = metric(in);
      std::vector<VectorField> fields;
      const bool searched = field.empty();
      if (searched) {
        fields = search_null_congruence(g);
      } else {
        const auto parts = split_top_level(field);
        if (parts.size() != g.dim()) {
          throw InputError("--field needs " + std::to_string(g.dim()) + " components, got " +
                           std::to_string(parts.size()));
        }
        const auto ctx = parse_context(in.file);
        std::vector<Expr> comps;
        int col = 1;
        for (const auto& p : parts) {
          comps.push_back(sym::parse_expr(p, ctx, 1, col));
          col += static_cast<int>(p.size()) + 1;
        }
        fields.emplace_back(g.chart_ptr(), comps);
      }
      const auto rep = invariant_report(g, order < 0 ? 0 : order);
      std::vector<CriterionReport> reports;
      for (const auto& N : fields) reports.push_back(check_theorem_criterion(g, N, &rep));
      const auto m = summarize(g, in.source);
      emit(as_json ? render(criterion_json(m, reports, searched)) : criterion_text(m, reports, searched), out_path);
      return kOk;
    }
    if (*cls) {
      const auto in = load(file);
      const auto c = classify_geometry(metric(in), order < 0 ? 2 : order);
      const auto m = summarize(metric(in), in.source);
      emit(as_json ? render(classify_json(m, c)) : classify_text(m, c), out_path);
      return kOk;
    }
    if (*probe) {
      const auto a = load(file);
      const auto b = load(file2);
      ProbeAnsatz ansatz = ProbeAnsatz::Gradient;
      if (!ansatz_name.empty()) {
        ansatz = parse_ansatz(ansatz_name);
      } else if (a.file.torsion) {
        ansatz = a.file.torsion->ansatz;
      }
      const int k = order < 0 ? 0 : order;
      const auto r = discriminate_with_torsion(metric(a), metric(b), ansatz, k);
      const TorsionSpec t{ansatz, {}};
      const auto ma = summarize(metric(a), a.source, t);
      const auto mb = summarize(metric(b), b.source, t);
      emit(as_json ? render(probe_json(ma, mb, ansatz, k, r)) : probe_text(ma, mb, ansatz, k, r), out_path);
      return r.verdict == ProbeVerdict::Distinguished ? kOk : kInconclusive;
    }
    if (*cat_list) {
      std::vector<CatalogEntry> entries;
      for (const auto& n : catalog_names()) entries.push_back(catalog_get(n));
      emit(as_json ? render(catalog_json(entries)) : catalog_text(entries), out_path);
      return kOk;
    }
    if (*cat_export) {
      emit(write_metric_file(catalog_get(entry_name, params), alternate), out_path);
      return kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const MathError& e) {
    std::cerr << "math error: " << e.what() << "\n";
    return kMathError;
  } catch (const UndecidedError& e) {
    std::cerr << "undecided: " << e.what() << "\n";
    return kMathError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMathError;
  }
  return kOk;
}
