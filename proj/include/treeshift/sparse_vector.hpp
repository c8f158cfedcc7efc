#pragma once

#include <complex>
#include <map>
#include <set>

#include "treeshift/vertex.hpp"

namespace treeshift {

using Complex = std::complex<double>;

/// Finitely supported function on vertices. Zero entries are never stored.
class SparseVector {
 public:
  SparseVector() = default;

  static SparseVector basis(const VertexId& u) {
    SparseVector e;
    e.entries_.emplace(u, Complex{1.0, 0.0});
    return e;
  }

  Complex operator[](const VertexId& v) const {
    const auto it = entries_.find(v);
    return it == entries_.end() ? Complex{} : it->second;
  }

  void add(const VertexId& v, Complex c) {
    if (c == Complex{}) return;
    auto [it, inserted] = entries_.emplace(v, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) entries_.erase(it);
    }
  }

  const std::map<VertexId, Complex>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  std::set<VertexId> support() const {
    std::set<VertexId> s;
    for (const auto& [v, _] : entries_) s.insert(v);
    return s;
  }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& [_, c] : entries_) s += std::norm(c);
    return s;
  }

  SparseVector& operator+=(const SparseVector& o) {
    for (const auto& [v, c] : o.entries_) add(v, c);
    return *this;
  }

  SparseVector& operator*=(Complex s) {
    if (s == Complex{}) {
      entries_.clear();
      return *this;
    }
    for (auto& [_, c] : entries_) c *= s;
    return *this;
  }

  friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) {
    for (const auto& [v, c] : b.entries_) a.add(v, -c);
    return a;
  }
  friend SparseVector operator*(Complex s, SparseVector a) { return a *= s; }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::map<VertexId, Complex> entries_;
};

/// <f, g>, linear in the first argument.
inline Complex inner(const SparseVector& f, const SparseVector& g) {
  Complex s{};
  const auto& small = f.entries().size() <= g.entries().size() ? f : g;
  for (const auto& [v, _] : small.entries()) s += f[v] * std::conj(g[v]);
  return s;
}

}  // namespace treeshift
