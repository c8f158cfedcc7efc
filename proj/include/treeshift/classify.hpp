#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "treeshift/dense.hpp"
#include "treeshift/profiles.hpp"
#include "treeshift/shift.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {

// ---------------------------------------------------------------------------
// Formal normality

enum class NormalityStatus { FormallyNormalNormal, Not, ZeroOperator };
enum class NormalityFailure { NoBiInfinitePath, NonconstantModulus, NonzeroOffPath };

inline const char* to_string(NormalityStatus s) {
  switch (s) {
    case NormalityStatus::FormallyNormalNormal:
      return "FormallyNormalNormal";
    case NormalityStatus::Not:
      return "Not";
    case NormalityStatus::ZeroOperator:
      return "ZeroOperator";
  }
  return "?";
}

inline const char* to_string(NormalityFailure f) {
  switch (f) {
    case NormalityFailure::NoBiInfinitePath:
      return "NoBiInfinitePath";
    case NormalityFailure::NonconstantModulus:
      return "NonconstantModulus";
    case NormalityFailure::NonzeroOffPath:
      return "NonzeroOffPath";
  }
  return "?";
}

/// On success `path` enumerates the bi-infinite path carrying every nonzero
/// weight and `alpha` is their common modulus. On failure `reason` says
/// which part of the path condition broke and `at` names a vertex where it
/// did, when there is one.
struct FormalNormalityVerdict {
  NormalityStatus status = NormalityStatus::Not;
  std::optional<PathEnumeration> path;
  double alpha = 0.0;
  std::optional<NormalityFailure> reason;
  std::optional<VertexId> at;

  bool normal() const { return status == NormalityStatus::FormallyNormalNormal; }
};

namespace detail {

inline FormalNormalityVerdict not_normal(NormalityFailure why, std::optional<VertexId> at = std::nullopt) {
  FormalNormalityVerdict v;
  v.reason = why;
  v.at = std::move(at);
  return v;
}

}  // namespace detail

/// Formally normal (equivalently: bounded and normal) iff the nonzero
/// weights sit on one bi-infinite path u_{n-1} = par(u_n) with constant
/// modulus, and every other weight is zero.
inline FormalNormalityVerdict formal_normality(const ProfileShift& s, double tol = kModulusTol) {
  using detail::not_normal;
  if (is_zero(s)) return {NormalityStatus::ZeroOperator, std::nullopt, 0.0, std::nullopt, std::nullopt};

  const auto& tree = s.tree();
  const auto& w = s.weights();
  if (!w.stem || w.stem->tail_modulus == 0.0) return not_normal(NormalityFailure::NoBiInfinitePath);
  const double alpha = w.stem->tail_modulus;

  auto on_path = [&](const VertexId& v) -> std::optional<FormalNormalityVerdict> {
    const double m = std::abs(s.weight(v));
    if (m == 0.0) return not_normal(NormalityFailure::NoBiInfinitePath, v);
    if (!same_modulus(m, alpha, tol)) return not_normal(NormalityFailure::NonconstantModulus, v);
    return std::nullopt;
  };

  for (auto k = static_cast<std::int64_t>(w.stem->prefix.size()); k >= 1; --k) {
    if (auto bad = on_path(VertexId::stem(-k))) return *bad;
  }

  PathEnumeration path;
  path.bilateral = true;
  VertexId cur = tree.core().root();
  if (auto bad = on_path(cur)) return *bad;
  while (true) {
    path.core_chain.push_back(cur);
    std::vector<VertexId> nonzero;
    for (const auto& c : tree.children(cur)) {
      if (s.weight(c) != Complex{}) nonzero.push_back(c);
    }
    if (nonzero.size() >= 2) return not_normal(NormalityFailure::NonzeroOffPath, nonzero[1]);
    if (nonzero.empty()) return not_normal(NormalityFailure::NoBiInfinitePath, cur);
    const VertexId next = nonzero.front();
    if (auto bad = on_path(next)) return *bad;
    if (next.is_ray()) {
      const auto& ray = w.rays.at(next.name);
      const auto last = static_cast<std::int64_t>(ray.prefix.size()) + 1;
      for (std::int64_t k = 2; k <= last; ++k) {
        if (auto bad = on_path(VertexId::ray(next.name, k))) return *bad;
      }
      path.ray = next.name;
      break;
    }
    cur = next;
  }

  for (const auto& [v, c] : w.core) {
    if (c != Complex{} && !path.index_of(v)) return not_normal(NormalityFailure::NonzeroOffPath, v);
  }
  for (const auto& [name, t] : w.rays) {
    if (name == path.ray) continue;
    for (std::size_t i = 0; i < t.prefix.size(); ++i) {
      if (t.prefix[i] != Complex{}) {
        return not_normal(NormalityFailure::NonzeroOffPath, VertexId::ray(name, static_cast<std::int64_t>(i) + 1));
      }
    }
    if (t.tail_modulus != 0.0) {
      return not_normal(NormalityFailure::NonzeroOffPath, VertexId::ray(name, static_cast<std::int64_t>(t.prefix.size()) + 1));
    }
  }
  return {NormalityStatus::FormallyNormalNormal, std::move(path), alpha, std::nullopt, std::nullopt};
}

inline FormalNormalityVerdict formal_normality(const FiniteShift& s, double tol = kModulusTol) {
  return formal_normality(as_profile(s), tol);
}

// ---------------------------------------------------------------------------
// Numeric normality oracle

/// D = M*M - MM* on a truncation. Rows of D at interior vertices (parent
/// and all children kept by the cut) agree with the untruncated operator.
struct CommutatorDefect {
  double max_interior_defect = 0.0;
  std::optional<VertexId> argmax;
  std::vector<VertexId> basis;
  std::vector<VertexId> interior;
  Eigen::MatrixXcd defect;
  Window window;
  double tol = 0.0;

  bool within_tolerance() const { return max_interior_defect <= tol; }
};

namespace detail {

inline CommutatorDefect commutator_defect_on(const FiniteShift& finite, const std::set<VertexId>& boundary,
                                             const Window& window, double tol) {
  CommutatorDefect out;
  out.window = window;
  out.tol = tol;
  const auto op = to_dense(finite);
  out.basis = op.basis;
  out.defect = op.matrix.adjoint() * op.matrix - op.matrix * op.matrix.adjoint();
  for (const auto& v : op.basis) {
    if (!boundary.contains(v)) out.interior.push_back(v);
  }
  if (out.interior.empty()) throw WindowError("truncation has no interior vertices; enlarge the window");
  for (const auto& v : out.interior) {
    const auto i = op.index(v);
    const double row = out.defect.row(i).cwiseAbs().maxCoeff();
    if (!out.argmax || row > out.max_interior_defect) {
      out.max_interior_defect = row;
      out.argmax = v;
    }
  }
  return out;
}

}  // namespace detail

inline CommutatorDefect commutator_defect(const ProfileShift& s, const Window& window, double tol = 1e-10) {
  const auto cut = truncate(s.tree(), window);
  return detail::commutator_defect_on(restrict_to(s, cut.tree), cut.boundary, window, tol);
}

/// Finite trees are their own truncation: every vertex is interior.
inline CommutatorDefect commutator_defect(const FiniteShift& s, double tol = 1e-10) {
  return detail::commutator_defect_on(s, {}, Window{}, tol);
}

// ---------------------------------------------------------------------------
// N = alpha U (+) 0

/// X is the witness path, Y its complement: the off-path core vertices
/// together with every vertex of the off-path rays.
struct NormalDecomposition {
  double alpha = 0.0;
  PathEnumeration path;
  std::set<VertexId> zero_core;
  std::set<std::string> zero_rays;

  bool on_path(const VertexId& v) const { return path.index_of(v).has_value(); }
};

/// Splits a normal shift into its scaled bilateral part and its zero part,
/// and checks over `window` that both parts are invariant and that the
/// shift kills the zero part.
inline NormalDecomposition decompose_normal(const ProfileShift& s, const FormalNormalityVerdict& verdict,
                                            std::optional<Window> window = std::nullopt) {
  if (!verdict.normal() || !verdict.path) throw PreconditionError("decompose_normal needs a FormallyNormalNormal verdict");
  NormalDecomposition d;
  d.alpha = verdict.alpha;
  d.path = *verdict.path;
  for (const auto& v : s.tree().core().vertices()) {
    if (!d.on_path(v)) d.zero_core.insert(v);
  }
  for (const auto& r : s.tree().rays()) {
    if (r.name != d.path.ray) d.zero_rays.insert(r.name);
  }

  const auto sk = skeleton_window(s);
  const Window w = window ? Window{std::max(sk.stem_depth, window->stem_depth), std::max(sk.ray_length, window->ray_length)} : sk;
  const auto cut = truncate(s.tree(), w);
  for (const auto& u : cut.tree.vertices()) {
    const auto image = apply(s, SparseVector::basis(u));
    if (d.on_path(u)) {
      for (const auto& v : image.support()) {
        if (!d.on_path(v)) throw PreconditionError("path part is not invariant at " + to_string(u));
      }
    } else if (!image.empty()) {
      throw PreconditionError("shift does not vanish on the zero part at " + to_string(u));
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Modelability of normal extensions

enum class ExtensionStatus { BilateralMultiple, PerturbedUnilateral, NotModelable };
enum class NotModelableReason { ZeroOperator, ZeroWeight, NonconstantBilateral, WeightPattern, BranchingOrLeaf };

inline const char* to_string(ExtensionStatus s) {
  switch (s) {
    case ExtensionStatus::BilateralMultiple:
      return "BilateralMultiple";
    case ExtensionStatus::PerturbedUnilateral:
      return "PerturbedUnilateral";
    case ExtensionStatus::NotModelable:
      return "NotModelable";
  }
  return "?";
}

inline const char* to_string(NotModelableReason r) {
  switch (r) {
    case NotModelableReason::ZeroOperator:
      return "ZeroOperator";
    case NotModelableReason::ZeroWeight:
      return "ZeroWeight";
    case NotModelableReason::NonconstantBilateral:
      return "NonconstantBilateral";
    case NotModelableReason::WeightPattern:
      return "WeightPattern";
    case NotModelableReason::BranchingOrLeaf:
      return "BranchingOrLeaf";
  }
  return "?";
}

/// BilateralMultiple(alpha): unitarily alpha times the bilateral shift.
/// PerturbedUnilateral(alpha, theta): unitarily alpha times the unilateral
/// shift with weights {theta, 1, 1, ...}, theta in (0, 1].
/// These verdicts state the necessary weight pattern only; subnormality
/// itself is not certified.
struct ExtensionVerdict {
  ExtensionStatus status = ExtensionStatus::NotModelable;
  double alpha = 0.0;
  double theta = 0.0;
  std::optional<NotModelableReason> reason;
  std::optional<VertexId> at;
  std::optional<PathEnumeration> path;
};

namespace detail {

inline ExtensionVerdict not_modelable(NotModelableReason why, std::optional<VertexId> at = std::nullopt) {
  ExtensionVerdict v;
  v.reason = why;
  v.at = std::move(at);
  return v;
}

}  // namespace detail

inline ExtensionVerdict classify_extension(const ProfileShift& s, bool nonzero_weights_required = true,
                                           double tol = kModulusTol) {
  using detail::not_modelable;
  if (is_zero(s)) return not_modelable(NotModelableReason::ZeroOperator);
  const auto reps = representative_vertices(s);
  if (nonzero_weights_required) {
    for (const auto& v : reps) {
      if (s.has_weight(v) && s.weight(v) == Complex{}) return not_modelable(NotModelableReason::ZeroWeight, v);
    }
  }

  auto shape = path_shape(s.tree());
  if (shape.shape == PathShape::NotAPath) {
    const auto branching = branching_vertices(s.tree());
    return not_modelable(NotModelableReason::BranchingOrLeaf,
                         branching.empty() ? std::nullopt : std::optional<VertexId>(*branching.begin()));
  }
  const auto& path = *shape.enumeration;
  const double alpha = s.weights().rays.at(path.ray).tail_modulus;
  const auto last = *path.index_of(reps.back());

  if (shape.shape == PathShape::ZPath) {
    for (const auto& v : reps) {
      if (s.has_weight(v) && !same_modulus(std::abs(s.weight(v)), alpha, tol)) {
        return not_modelable(NotModelableReason::NonconstantBilateral, v);
      }
    }
    if (!same_modulus(s.weights().stem->tail_modulus, alpha, tol)) {
      return not_modelable(NotModelableReason::NonconstantBilateral);
    }
    ExtensionVerdict v;
    v.status = ExtensionStatus::BilateralMultiple;
    v.alpha = alpha;
    v.path = path;
    return v;
  }

  if (alpha == 0.0) return not_modelable(NotModelableReason::WeightPattern, path.at(last));
  for (std::int64_t n = 2; n <= last; ++n) {
    if (!same_modulus(std::abs(s.weight(path.at(n))), alpha, tol)) {
      return not_modelable(NotModelableReason::WeightPattern, path.at(n));
    }
  }
  double theta = std::abs(s.weight(path.at(1))) / alpha;
  if (theta == 0.0 || (theta > 1.0 && !same_modulus(theta, 1.0, tol))) {
    return not_modelable(NotModelableReason::WeightPattern, path.at(1));
  }
  theta = std::min(theta, 1.0);
  ExtensionVerdict v;
  v.status = ExtensionStatus::PerturbedUnilateral;
  v.alpha = alpha;
  v.theta = theta;
  v.path = path;
  return v;
}

// ---------------------------------------------------------------------------
// The extension model on Z with a leaf at 0

/// N on Z-hat: weight 0 at the leaf omega, alpha along Z. The unilateral
/// shift sits inside via e~_0 = sqrt(1 - theta^2) e_omega + theta e_0 and
/// e~_n = e_n for n >= 1.
struct ExtensionModel {
  double alpha = 0.0;
  double theta = 0.0;
  ProfileShift shift;

  SparseVector embedded(std::int64_t n) const {
    if (n < 0) throw DomainError("embedded basis index must be >= 0");
    if (n > 0) return SparseVector::basis(profiles::integer_vertex(n));
    SparseVector e;
    e.add(VertexId::core(profiles::kLeaf), Complex{std::sqrt(1.0 - theta * theta), 0.0});
    e.add(VertexId::core("0"), Complex{theta, 0.0});
    return e;
  }
};

inline ExtensionModel build_extension_model(double alpha, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0, 1]");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
  WeightFamily w;
  w.core[VertexId::core("0")] = alpha;
  w.core[VertexId::core(profiles::kLeaf)] = 0.0;
  w.rays[profiles::kRay] = {{}, alpha};
  w.stem = TailedWeights{{}, alpha};
  return {alpha, theta, ProfileShift(profiles::zhat(), std::move(w))};
}

struct ExtensionCheckReport {
  double alpha = 0.0;
  double theta = 0.0;
  std::int64_t window = 0;
  double tol = 0.0;

  double gram_residual = 0.0;         // (a) max |<e~_i, e~_j> - delta_ij|
  double invariance_residual = 0.0;   // (b) max ||N e~_n - w_n e~_{n+1}||
  double restriction_residual = 0.0;  // (c) vs the unilateral shift matrix
  double source_residual = 0.0;       // (c) restriction moduli vs |lambda| of S
  std::vector<Complex> restriction_weights;
  bool model_normal = false;          // (d)
  bool source_isometric = false;      // (e)
  bool isometry_consistent = false;

  bool orthonormal() const { return gram_residual <= tol; }
  bool invariant() const { return invariance_residual <= tol; }
  bool restriction_matches() const { return restriction_residual <= tol && source_residual <= tol; }
  bool passed() const { return orthonormal() && invariant() && restriction_matches() && model_normal && isometry_consistent; }
};

/// Checks that `model` hosts a copy of S: the embedded vectors are
/// orthonormal, N maps their span into itself, N restricted there is the
/// unilateral shift {alpha theta, alpha, ...} that S is equivalent to, N is
/// normal, and S is an isometry (after scaling by 1/alpha) iff theta = 1.
inline ExtensionCheckReport verify_extension(const ProfileShift& s, const ExtensionModel& model, std::int64_t window = 30,
                                             double tol = 1e-12) {
  if (window < 1) throw WindowError("verify_extension needs a window of at least 1");
  const auto verdict = classify_extension(s);
  if (verdict.status != ExtensionStatus::PerturbedUnilateral) {
    throw PreconditionError("verify_extension needs a PerturbedUnilateral shift");
  }
  if (!same_modulus(verdict.alpha, model.alpha) || !same_modulus(verdict.theta, model.theta)) {
    throw PreconditionError("model parameters do not match the shift");
  }
  const auto& path = *verdict.path;
  ExtensionCheckReport r;
  r.alpha = model.alpha;
  r.theta = model.theta;
  r.window = window;
  r.tol = tol;

  const auto n = static_cast<std::size_t>(window) + 1;
  std::vector<SparseVector> e;
  std::vector<SparseVector> ne;
  for (std::size_t i = 0; i < n; ++i) {
    e.push_back(model.embedded(static_cast<std::int64_t>(i)));
    ne.push_back(apply(model.shift, e.back()));
  }
  auto expected_weight = [&](std::size_t j) { return j == 0 ? model.alpha * model.theta : model.alpha; };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      r.gram_residual = std::max(r.gram_residual, std::abs(inner(e[i], e[j]) - delta));
    }
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const auto diff = ne[j] - Complex{expected_weight(j), 0.0} * e[j + 1];
    r.invariance_residual = std::max(r.invariance_residual, std::sqrt(diff.norm_sq()));
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex entry = inner(ne[j], e[i]);
      const double expected = i == j + 1 ? expected_weight(j) : 0.0;
      r.restriction_residual = std::max(r.restriction_residual, std::abs(entry - expected));
      if (i == j + 1) {
        r.restriction_weights.push_back(entry);
        const double source = std::abs(s.weight(path.at(static_cast<std::int64_t>(j) + 1)));
        r.source_residual = std::max(r.source_residual, std::abs(std::abs(entry) - source));
      }
    }
  }

  const auto normality = formal_normality(model.shift);
  r.model_normal = normality.normal() && same_modulus(normality.alpha, model.alpha);

  const double top = basis_norm_sq(s, path.at(0));
  r.source_isometric = std::abs(top - model.alpha * model.alpha) <= tol * model.alpha * model.alpha;
  r.isometry_consistent = r.source_isometric == same_modulus(model.theta, 1.0, tol);
  return r;
}

/// The unilateral shift read off check (c), as a Z+ profile.
inline ProfileShift restriction_shift(const ExtensionCheckReport& r) {
  return profiles::unilateral(r.restriction_weights, r.alpha);
}

}  // namespace treeshift
