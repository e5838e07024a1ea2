#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cscal/symbolic/expr.hpp"

namespace cscal {

using sym::Expr;

// Ordered coordinate names. Coordinate symbols are created in declaration order,
// which fixes their presentation order in printed expressions.
class Chart {
 public:
  explicit Chart(std::vector<std::string> names);

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const Expr& coord(std::size_t i) const { return coords_.at(i); }
  std::size_t index_of(std::string_view name) const;  // throws UnknownCoordinateError
  bool contains(std::string_view name) const;

  friend bool operator==(const Chart& a, const Chart& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::vector<Expr> coords_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::vector<std::string> names);

// Partial derivative with respect to a named chart coordinate.
Expr differentiate(const Expr& e, const Chart& chart, std::string_view coordinate);

}  // namespace cscal
