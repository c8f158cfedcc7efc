#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "treeshift/errors.hpp"
#include "treeshift/sparse_vector.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {

/// Relative tolerance for comparing weight moduli.
inline constexpr double kModulusTol = 1e-9;

inline bool same_modulus(double a, double b, double tol = kModulusTol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Weights along an infinite chain: an explicit prefix, then a constant
/// positive real weight equal to tail_modulus.
struct TailedWeights {
  std::vector<Complex> prefix;
  double tail_modulus = 0.0;

  /// Weight of the k-th chain vertex, k >= 1.
  Complex at(std::int64_t k) const {
    if (k < 1) throw DomainError("chain position must be >= 1");
    const auto i = static_cast<std::size_t>(k - 1);
    return i < prefix.size() ? prefix[i] : Complex{tail_modulus, 0.0};
  }

  friend bool operator==(const TailedWeights&, const TailedWeights&) = default;
};

/// Weights on V°. `core` covers every non-root vertex of a finite tree, or
/// the core vertices of a profile (the core root included when the profile
/// has a stem). Stem position k is vertex stem(-k).
struct WeightFamily {
  std::map<VertexId, Complex> core;
  std::map<std::string, TailedWeights> rays;
  std::optional<TailedWeights> stem;

  friend bool operator==(const WeightFamily&, const WeightFamily&) = default;
};

namespace detail {

inline void check_finite(Complex c, const std::string& where) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("non-finite weight at " + where);
}

inline void check_tailed(const TailedWeights& t, const std::string& where) {
  for (const auto& c : t.prefix) check_finite(c, where);
  if (!std::isfinite(t.tail_modulus) || t.tail_modulus < 0.0) {
    throw DomainError("tail modulus of " + where + " must be finite and nonnegative");
  }
}

inline void check_core_weights(const std::map<VertexId, Complex>& core, const FiniteTree& tree, bool root_weighted) {
  for (const auto& v : tree.vertices()) {
    const bool needs = root_weighted || v != tree.root();
    if (needs && !core.contains(v)) throw DomainError("missing weight for vertex " + to_string(v));
  }
  for (const auto& [v, c] : core) {
    if (!tree.contains(v)) throw DomainError("weight given for unknown vertex " + to_string(v));
    if (!root_weighted && v == tree.root()) throw DomainError("the root " + to_string(v) + " carries no weight");
    check_finite(c, to_string(v));
  }
}

}  // namespace detail

/// The weighted shift S: e_u -> sum over children v of lambda_v e_v.
template <DirectedTree Tree>
class WeightedShift {
 public:
  WeightedShift(Tree tree, WeightFamily weights) : tree_(std::move(tree)), weights_(std::move(weights)) {
    if constexpr (std::is_same_v<Tree, FiniteTree>) {
      if (!weights_.rays.empty() || weights_.stem) throw DomainError("finite trees take no ray or stem weights");
      detail::check_core_weights(weights_.core, tree_, false);
    } else {
      detail::check_core_weights(weights_.core, tree_.core(), tree_.has_stem());
      if (tree_.has_stem() != weights_.stem.has_value()) {
        throw DomainError(tree_.has_stem() ? "stem weights missing" : "stem weights given for a profile without stem");
      }
      if (weights_.stem) detail::check_tailed(*weights_.stem, "stem");
      if (weights_.rays.size() != tree_.rays().size()) throw DomainError("ray weights do not match the rays");
      for (const auto& r : tree_.rays()) {
        const auto it = weights_.rays.find(r.name);
        if (it == weights_.rays.end()) throw DomainError("missing weights for ray '" + r.name + "'");
        detail::check_tailed(it->second, "ray '" + r.name + "'");
      }
    }
  }

  const Tree& tree() const { return tree_; }
  const WeightFamily& weights() const { return weights_; }

  bool has_weight(const VertexId& v) const { return tree_.contains(v) && tree_.parent(v).has_value(); }

  Complex weight(const VertexId& v) const {
    if (!has_weight(v)) throw DomainError("vertex " + to_string(v) + " carries no weight");
    switch (v.kind) {
      case VertexKind::Stem:
        if (weights_.stem) return weights_.stem->at(-v.index);
        break;
      case VertexKind::Ray:
        if (const auto it = weights_.rays.find(v.name); it != weights_.rays.end()) return it->second.at(v.index);
        break;
      case VertexKind::Core:
        break;
    }
    return weights_.core.at(v);
  }

  friend bool operator==(const WeightedShift&, const WeightedShift&) = default;

 private:
  Tree tree_;
  WeightFamily weights_;
};

using FiniteShift = WeightedShift<FiniteTree>;
using ProfileShift = WeightedShift<TreeProfile>;

inline ProfileShift as_profile(const FiniteShift& s) { return ProfileShift(TreeProfile(s.tree()), s.weights()); }

/// Window wide enough that every vertex beyond it sees only tail weights.
inline Window skeleton_window(const ProfileShift& s) {
  std::int64_t ray = 0;
  for (const auto& [_, t] : s.weights().rays) ray = std::max<std::int64_t>(ray, static_cast<std::int64_t>(t.prefix.size()));
  const std::int64_t stem = s.weights().stem ? static_cast<std::int64_t>(s.weights().stem->prefix.size()) : 0;
  return {stem + 2, ray + 2};
}

/// Vertices whose local data determines every weight-modulus property of
/// the shift: all vertices of a finite tree, the skeleton window of a profile.
inline std::vector<VertexId> representative_vertices(const FiniteShift& s) {
  return {s.tree().vertices().begin(), s.tree().vertices().end()};
}

inline std::vector<VertexId> representative_vertices(const ProfileShift& s) {
  const auto t = truncate(s.tree(), skeleton_window(s));
  return {t.tree.vertices().begin(), t.tree.vertices().end()};
}

// ---------------------------------------------------------------------------
// Action

template <DirectedTree Tree>
SparseVector apply(const WeightedShift<Tree>& s, const SparseVector& f) {
  SparseVector out;
  for (const auto& [u, c] : f.entries()) {
    for (const auto& v : s.tree().children(u)) out.add(v, s.weight(v) * c);
  }
  return out;
}

/// S* e_u = conj(lambda_u) e_{par u}; S* e_root = 0.
template <DirectedTree Tree>
SparseVector apply_adjoint(const WeightedShift<Tree>& s, const SparseVector& f) {
  SparseVector out;
  for (const auto& [u, c] : f.entries()) {
    if (const auto p = s.tree().parent(u)) out.add(*p, std::conj(s.weight(u)) * c);
  }
  return out;
}

/// ||S e_u||^2 = sum over children of |lambda_v|^2 (0 for a leaf).
template <DirectedTree Tree>
double basis_norm_sq(const WeightedShift<Tree>& s, const VertexId& u) {
  double sum = 0.0;
  for (const auto& v : s.tree().children(u)) sum += std::norm(s.weight(v));
  return sum;
}

/// alpha = sup_u ||S e_u||^2, which equals ||S||^2. Exact on profiles:
/// beyond the skeleton every vertex has a single child with tail weight.
template <DirectedTree Tree>
double norm_sq_bound(const WeightedShift<Tree>& s) {
  double alpha = 0.0;
  for (const auto& u : representative_vertices(s)) alpha = std::max(alpha, basis_norm_sq(s, u));
  if constexpr (std::is_same_v<Tree, TreeProfile>) {
    for (const auto& [_, t] : s.weights().rays) alpha = std::max(alpha, t.tail_modulus * t.tail_modulus);
    if (s.weights().stem) alpha = std::max(alpha, s.weights().stem->tail_modulus * s.weights().stem->tail_modulus);
  }
  return alpha;
}

template <DirectedTree Tree>
bool is_injective(const WeightedShift<Tree>& s) {
  if (!is_leafless(s.tree())) return false;
  const auto reps = representative_vertices(s);
  if (!std::all_of(reps.begin(), reps.end(), [&](const VertexId& u) { return basis_norm_sq(s, u) > 0.0; })) {
    return false;
  }
  if constexpr (std::is_same_v<Tree, TreeProfile>) {
    for (const auto& [_, t] : s.weights().rays) {
      if (t.tail_modulus <= 0.0) return false;
    }
    if (s.weights().stem && s.weights().stem->tail_modulus <= 0.0) return false;
  }
  return true;
}

template <DirectedTree Tree>
bool is_zero(const WeightedShift<Tree>& s) {
  for (const auto& [_, c] : s.weights().core) {
    if (c != Complex{}) return false;
  }
  auto zero_chain = [](const TailedWeights& t) {
    return t.tail_modulus == 0.0 && std::all_of(t.prefix.begin(), t.prefix.end(), [](Complex c) { return c == Complex{}; });
  };
  for (const auto& [_, t] : s.weights().rays) {
    if (!zero_chain(t)) return false;
  }
  return !s.weights().stem || zero_chain(*s.weights().stem);
}

/// S^n e_u. With a window, throws WindowError if any intermediate support
/// leaves it.
template <DirectedTree Tree>
SparseVector power_apply(const WeightedShift<Tree>& s, const VertexId& u, std::int64_t n,
                         const std::optional<Window>& window = std::nullopt) {
  if (n < 0) throw DomainError("power_apply needs n >= 0");
  if (!s.tree().contains(u)) throw DomainError("unknown vertex " + to_string(u));
  auto check = [&](const SparseVector& f, std::int64_t step) {
    if (!window) return;
    for (const auto& [v, _] : f.entries()) {
      if (!in_window(*window, v)) {
        throw WindowError("S^" + std::to_string(step) + " e_" + to_string(u) + " reaches " + to_string(v) +
                          ", outside the window; enlarge the window");
      }
    }
  };
  SparseVector f = SparseVector::basis(u);
  check(f, 0);
  for (std::int64_t i = 1; i <= n; ++i) {
    f = apply(s, f);
    check(f, i);
  }
  return f;
}

/// s_k = ||S^k e_u||^2 for k = 0..count-1, by repeated sparse application.
template <DirectedTree Tree>
std::vector<double> moment_sequence(const WeightedShift<Tree>& s, const VertexId& u, std::int64_t count,
                                    const std::optional<Window>& window = std::nullopt) {
  if (count < 1) throw DomainError("moment_sequence needs count >= 1");
  if (!s.tree().contains(u)) throw DomainError("unknown vertex " + to_string(u));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  SparseVector f = SparseVector::basis(u);
  for (std::int64_t k = 0; k < count; ++k) {
    if (k > 0) f = apply(s, f);
    if (window) {
      for (const auto& [v, _] : f.entries()) {
        if (!in_window(*window, v)) throw WindowError("moment " + std::to_string(k) + " leaves the window at " + to_string(v));
      }
    }
    out.push_back(f.norm_sq());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derived shifts

/// The shift on the truncated tree, keeping the weights of every vertex
/// whose parent survived the cut.
inline FiniteShift restrict_to(const ProfileShift& s, const FiniteTree& finite) {
  WeightFamily w;
  for (const auto& [child, _] : finite.parent_map()) w.core.emplace(child, s.weight(child));
  return FiniteShift(finite, std::move(w));
}

inline FiniteShift restrict_to(const FiniteShift& s, const FiniteTree& finite) {
  WeightFamily w;
  for (const auto& [child, _] : finite.parent_map()) w.core.emplace(child, s.weight(child));
  return FiniteShift(finite, std::move(w));
}

/// Multiplies every weight by c. Tails stay real: their modulus scales by |c|.
template <DirectedTree Tree>
WeightedShift<Tree> scaled(const WeightedShift<Tree>& s, Complex c) {
  WeightFamily w = s.weights();
  for (auto& [_, x] : w.core) x *= c;
  auto scale_chain = [&](TailedWeights& t) {
    for (auto& x : t.prefix) x *= c;
    t.tail_modulus *= std::abs(c);
  };
  for (auto& [_, t] : w.rays) scale_chain(t);
  if (w.stem) scale_chain(*w.stem);
  return WeightedShift<Tree>(s.tree(), std::move(w));
}

/// Multiplies each explicitly stored weight by a unit-modulus phase chosen
/// by `phase(v)` (an angle in radians). Moduli are unchanged.
template <DirectedTree Tree, class PhaseFn>
WeightedShift<Tree> rephased(const WeightedShift<Tree>& s, PhaseFn&& phase) {
  WeightFamily w = s.weights();
  for (auto& [v, x] : w.core) x *= std::polar(1.0, phase(v));
  for (auto& [name, t] : w.rays) {
    for (std::size_t i = 0; i < t.prefix.size(); ++i) {
      t.prefix[i] *= std::polar(1.0, phase(VertexId::ray(name, static_cast<std::int64_t>(i) + 1)));
    }
  }
  if (w.stem) {
    for (std::size_t i = 0; i < w.stem->prefix.size(); ++i) {
      w.stem->prefix[i] *= std::polar(1.0, phase(VertexId::stem(-static_cast<std::int64_t>(i) - 1)));
    }
  }
  return WeightedShift<Tree>(s.tree(), std::move(w));
}

}  // namespace treeshift
