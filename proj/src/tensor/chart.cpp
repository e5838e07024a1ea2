#include "cscal/tensor/chart.hpp"

#include <algorithm>
#include <set>

#include "cscal/error.hpp"

namespace cscal {

Chart::Chart(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2) throw DimensionError("a chart needs at least 2 coordinates");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw InputError("empty coordinate name");
    if (!seen.insert(n).second) throw InputError("duplicate coordinate '" + n + "'");
    coords_.push_back(Expr::symbol(n));
  }
}

std::size_t Chart::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw UnknownCoordinateError(std::string(name));
  return static_cast<std::size_t>(it - names_.begin());
}

bool Chart::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

ChartPtr make_chart(std::vector<std::string> names) { return std::make_shared<const Chart>(std::move(names)); }

Expr differentiate(const Expr& e, const Chart& chart, std::string_view coordinate) {
  return sym::differentiate(e, chart.coord(chart.index_of(coordinate)));
}

}  // namespace cscal
