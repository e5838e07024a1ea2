#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "cscal/tensor/chart.hpp"
#include "cscal/tensor/metric.hpp"

namespace cscal {

enum class Variance : std::uint8_t { Up, Down };

// Declared (anti)symmetry between two slots. Used to validate and to skip
// redundant components; storage stays dense.
struct PairSymmetry {
  int i;
  int j;
  bool anti;
};

using Index = std::vector<int>;

class Tensor {
 public:
  Tensor(ChartPtr chart, std::vector<Variance> slots);

  static Tensor scalar(ChartPtr chart, Expr value);

  const Chart& chart() const { return *chart_; }
  const ChartPtr& chart_ptr() const { return chart_; }
  std::size_t dim() const { return chart_->dim(); }
  std::size_t rank() const { return slots_.size(); }
  const std::vector<Variance>& slots() const { return slots_; }
  Variance variance(std::size_t slot) const;

  std::size_t size() const { return comps_.size(); }
  std::size_t offset(std::span<const int> idx) const;
  Index index_of(std::size_t offset) const;

  const Expr& operator[](std::span<const int> idx) const { return comps_[offset(idx)]; }
  Expr& operator[](std::span<const int> idx) { return comps_[offset(idx)]; }
  const Expr& at(std::initializer_list<int> idx) const { return comps_[offset({idx.begin(), idx.size()})]; }
  Expr& at(std::initializer_list<int> idx) { return comps_[offset({idx.begin(), idx.size()})]; }
  const std::vector<Expr>& components() const { return comps_; }
  std::vector<Expr>& components() { return comps_; }

  const std::vector<PairSymmetry>& symmetries() const { return syms_; }
  void declare(PairSymmetry s);
  void clear_symmetries() { syms_.clear(); }
  // Exact check of every declared symmetry.
  bool symmetries_hold() const;
  // Offset -> true if the index is the canonical representative under the
  // declared pair symmetries (i <= j, strictly for antisymmetric pairs).
  bool is_canonical(std::span<const int> idx) const;
  // Fills non-canonical components from canonical ones.
  void fill_from_canonical();

  bool is_zero() const;  // exact

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(const Expr& c, const Tensor& t);

 private:
  ChartPtr chart_;
  std::vector<Variance> slots_;
  std::vector<Expr> comps_;
  std::vector<PairSymmetry> syms_;
};

// Calls f(index) for every multi-index of the given rank over n values.
template <class F>
void for_each_index(std::size_t n, std::size_t rank, F&& f) {
  Index idx(rank, 0);
  for (;;) {
    f(static_cast<const Index&>(idx));
    std::size_t k = rank;
    while (k > 0) {
      --k;
      if (++idx[k] < static_cast<int>(n)) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (rank == 0) return;
  }
}

Tensor tensor_product(const Tensor& t, const Tensor& s);
Tensor contract(const Tensor& t, std::size_t i, std::size_t j);
Tensor raise_index(const Tensor& t, std::size_t slot, const Metric& g);
Tensor lower_index(const Tensor& t, std::size_t slot, const Metric& g);
// Bracket convention: includes 1/k!.
Tensor symmetrize(const Tensor& t, const std::vector<std::size_t>& slots);
Tensor antisymmetrize(const Tensor& t, const std::vector<std::size_t>& slots);

Tensor kronecker(ChartPtr chart);             // delta^a_b
Tensor metric_tensor(const Metric& g);        // g_ab
Tensor inverse_metric_tensor(const Metric& g);  // g^ab
// Fully covariant eps_{a1..an} = sqrt(|det g|) sign(a1..an), |det g| = (-1)^q det g.
Tensor levi_civita(const Metric& g);
int permutation_sign(std::span<const int> p);

}  // namespace cscal
