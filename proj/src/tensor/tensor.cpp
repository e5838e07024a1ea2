#include "cscal/tensor/tensor.hpp"

#include <algorithm>
#include <numeric>

#include "cscal/error.hpp"

namespace cscal {

namespace {

std::size_t ipow(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  while (k--) r *= n;
  return r;
}

void check_slot(const Tensor& t, std::size_t slot) {
  if (slot >= t.rank()) {
    throw SlotError("slot " + std::to_string(slot) + " out of range for rank " + std::to_string(t.rank()));
  }
}

void check_same_chart(const Tensor& a, const Tensor& b) {
  if (a.chart_ptr() != b.chart_ptr() && !(a.chart() == b.chart())) throw SlotError("tensors live on different charts");
}

}  // namespace

Tensor::Tensor(ChartPtr chart, std::vector<Variance> slots)
    : chart_(std::move(chart)), slots_(std::move(slots)), comps_(ipow(chart_->dim(), slots_.size())) {}

Tensor Tensor::scalar(ChartPtr chart, Expr value) {
  Tensor t(std::move(chart), {});
  t.comps_[0] = std::move(value);
  return t;
}

Variance Tensor::variance(std::size_t slot) const {
  check_slot(*this, slot);
  return slots_[slot];
}

std::size_t Tensor::offset(std::span<const int> idx) const {
  if (idx.size() != slots_.size()) throw SlotError("index rank mismatch");
  const std::size_t n = dim();
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw SlotError("index value out of range");
    off = off * n + static_cast<std::size_t>(i);
  }
  return off;
}

Index Tensor::index_of(std::size_t off) const {
  const std::size_t n = dim();
  Index idx(rank());
  for (std::size_t k = rank(); k-- > 0;) {
    idx[k] = static_cast<int>(off % n);
    off /= n;
  }
  return idx;
}

void Tensor::declare(PairSymmetry s) {
  if (s.i == s.j) throw SlotError("symmetry needs two distinct slots");
  if (s.i > s.j) std::swap(s.i, s.j);
  check_slot(*this, static_cast<std::size_t>(s.j));
  if (slots_[s.i] != slots_[s.j]) throw SlotError("symmetry between slots of different variance");
  syms_.push_back(s);
}

bool Tensor::symmetries_hold() const {
  for (std::size_t off = 0; off < comps_.size(); ++off) {
    Index idx = index_of(off);
    for (const auto& s : syms_) {
      Index sw = idx;
      std::swap(sw[s.i], sw[s.j]);
      const Expr& other = (*this)[sw];
      const Expr d = s.anti ? comps_[off] + other : comps_[off] - other;
      if (!sym::is_zero(d)) return false;
    }
  }
  return true;
}

bool Tensor::is_canonical(std::span<const int> idx) const {
  for (const auto& s : syms_) {
    if (idx[s.i] > idx[s.j] || (s.anti && idx[s.i] == idx[s.j])) return false;
  }
  return true;
}

void Tensor::fill_from_canonical() {
  for (std::size_t off = 0; off < comps_.size(); ++off) {
    Index idx = index_of(off);
    if (is_canonical(idx)) continue;
    bool zero = false;
    bool negate = false;
    for (const auto& s : syms_) {
      if (idx[s.i] == idx[s.j]) {
        if (s.anti) zero = true;
      } else if (idx[s.i] > idx[s.j]) {
        std::swap(idx[s.i], idx[s.j]);
        if (s.anti) negate = !negate;
      }
    }
    if (zero) {
      comps_[off] = Expr();
    } else {
      comps_[off] = negate ? -(*this)[idx] : (*this)[idx];
    }
  }
}

bool Tensor::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Expr& e) { return sym::is_zero(e); });
}

Tensor& Tensor::operator+=(const Tensor& o) {
  check_same_chart(*this, o);
  if (slots_ != o.slots_) throw SlotError("adding tensors of different variance");
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
  syms_.clear();
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
  check_same_chart(*this, o);
  if (slots_ != o.slots_) throw SlotError("subtracting tensors of different variance");
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
  syms_.clear();
  return *this;
}

Tensor operator*(const Expr& c, const Tensor& t) {
  Tensor out = t;
  for (auto& e : out.comps_) e = c * e;
  return out;
}

Tensor tensor_product(const Tensor& t, const Tensor& s) {
  check_same_chart(t, s);
  std::vector<Variance> slots = t.slots();
  slots.insert(slots.end(), s.slots().begin(), s.slots().end());
  Tensor out(t.chart_ptr(), std::move(slots));
  const std::size_t m = s.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Expr& a = t.components()[i];
    if (a.is_structural_zero()) continue;
    for (std::size_t j = 0; j < m; ++j) {
      const Expr& b = s.components()[j];
      if (!b.is_structural_zero()) out.components()[i * m + j] = a * b;
    }
  }
  return out;
}

Tensor contract(const Tensor& t, std::size_t i, std::size_t j) {
  check_slot(t, i);
  check_slot(t, j);
  if (i == j) throw SlotError("cannot contract a slot with itself");
  if (t.variance(i) == t.variance(j)) throw SlotError("contraction needs one up and one down slot");
  if (i > j) std::swap(i, j);
  std::vector<Variance> slots;
  for (std::size_t k = 0; k < t.rank(); ++k) {
    if (k != i && k != j) slots.push_back(t.slots()[k]);
  }
  Tensor out(t.chart_ptr(), std::move(slots));
  const std::size_t n = t.dim();
  for_each_index(n, out.rank(), [&](const Index& idx) {
    Index full;
    full.reserve(t.rank());
    std::size_t p = 0;
    for (std::size_t k = 0; k < t.rank(); ++k) full.push_back(k == i || k == j ? 0 : idx[p++]);
    Expr s;
    for (std::size_t c = 0; c < n; ++c) {
      full[i] = full[j] = static_cast<int>(c);
      s += t[full];
    }
    out[idx] = s;
  });
  return out;
}

namespace {

Tensor move_index(const Tensor& t, std::size_t slot, const Matrix& m, Variance from, Variance to) {
  check_slot(t, slot);
  if (t.variance(slot) != from) {
    throw SlotError(std::string("slot ") + std::to_string(slot) + " is not " + (from == Variance::Down ? "covariant" : "contravariant"));
  }
  std::vector<Variance> slots = t.slots();
  slots[slot] = to;
  Tensor out(t.chart_ptr(), std::move(slots));
  const std::size_t n = t.dim();
  for (std::size_t off = 0; off < out.size(); ++off) {
    Index idx = out.index_of(off);
    const int a = idx[slot];
    Expr s;
    for (std::size_t b = 0; b < n; ++b) {
      const Expr& mab = m[a][b];
      if (mab.is_structural_zero()) continue;
      idx[slot] = static_cast<int>(b);
      const Expr& c = t[idx];
      if (!c.is_structural_zero()) s += mab * c;
    }
    out.components()[off] = s;
  }
  return out;
}

Tensor permute_sum(const Tensor& t, const std::vector<std::size_t>& slots, bool anti) {
  for (auto s : slots) check_slot(t, s);
  if (slots.empty()) return t;
  for (auto s : slots) {
    if (t.variance(s) != t.variance(slots[0])) throw SlotError("(anti)symmetrization over slots of mixed variance");
  }
  std::vector<int> perm(slots.size());
  std::iota(perm.begin(), perm.end(), 0);
  Tensor out(t.chart_ptr(), t.slots());
  long count = 0;
  do {
    ++count;
    const int sign = anti ? permutation_sign(perm) : 1;
    for (std::size_t off = 0; off < t.size(); ++off) {
      Index idx = t.index_of(off);
      Index src = idx;
      for (std::size_t k = 0; k < slots.size(); ++k) src[slots[k]] = idx[slots[perm[k]]];
      const Expr& c = t[src];
      if (c.is_structural_zero()) continue;
      out.components()[off] += sign > 0 ? c : -c;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  const Expr inv(sym::Rational(1, count));
  for (auto& e : out.components()) e = e * inv;
  return out;
}

}  // namespace

Tensor raise_index(const Tensor& t, std::size_t slot, const Metric& g) {
  return move_index(t, slot, g.inverse(), Variance::Down, Variance::Up);
}

Tensor lower_index(const Tensor& t, std::size_t slot, const Metric& g) {
  return move_index(t, slot, g.components(), Variance::Up, Variance::Down);
}

Tensor symmetrize(const Tensor& t, const std::vector<std::size_t>& slots) { return permute_sum(t, slots, false); }

Tensor antisymmetrize(const Tensor& t, const std::vector<std::size_t>& slots) { return permute_sum(t, slots, true); }

Tensor kronecker(ChartPtr chart) {
  const std::size_t n = chart->dim();
  Tensor d(std::move(chart), {Variance::Up, Variance::Down});
  for (std::size_t a = 0; a < n; ++a) d.at({static_cast<int>(a), static_cast<int>(a)}) = Expr(1);
  return d;
}

Tensor metric_tensor(const Metric& g) {
  Tensor t(g.chart_ptr(), {Variance::Down, Variance::Down});
  for (std::size_t a = 0; a < g.dim(); ++a) {
    for (std::size_t b = 0; b < g.dim(); ++b) t.at({static_cast<int>(a), static_cast<int>(b)}) = g(a, b);
  }
  t.declare({0, 1, false});
  return t;
}

Tensor inverse_metric_tensor(const Metric& g) {
  Tensor t(g.chart_ptr(), {Variance::Up, Variance::Up});
  for (std::size_t a = 0; a < g.dim(); ++a) {
    for (std::size_t b = 0; b < g.dim(); ++b) t.at({static_cast<int>(a), static_cast<int>(b)}) = g.inv(a, b);
  }
  t.declare({0, 1, false});
  return t;
}

int permutation_sign(std::span<const int> p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  }
  return sign;
}

Tensor levi_civita(const Metric& g) {
  const std::size_t n = g.dim();
  Expr absdet = (g.signature().minus % 2) ? -g.det() : g.det();
  const Expr vol = sym::sqrt(absdet);
  Tensor eps(g.chart_ptr(), std::vector<Variance>(n, Variance::Down));
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    eps[perm] = permutation_sign(perm) > 0 ? vol : -vol;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) eps.declare({static_cast<int>(i), static_cast<int>(j), true});
  }
  return eps;
}

}  // namespace cscal
