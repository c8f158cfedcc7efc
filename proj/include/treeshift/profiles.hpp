#pragma once

#include <string>
#include <vector>

#include "treeshift/shift.hpp"

namespace treeshift::profiles {

/// Vertex naming shared by the standard profiles: core root "0", the ray
/// "z" carries 1, 2, ..., the stem carries -1, -2, ....
inline const std::string kRay = "z";
inline const std::string kLeaf = "omega";

inline VertexId integer_vertex(std::int64_t n) {
  if (n < 0) return VertexId::stem(n);
  if (n == 0) return VertexId::core("0");
  return VertexId::ray(kRay, n);
}

inline FiniteTree single_vertex() { return FiniteTree({VertexId::core("0")}, {}); }

/// Z+ = {0 -> 1 -> 2 -> ...}.
inline TreeProfile zplus() { return TreeProfile(single_vertex(), false, {{VertexId::core("0"), kRay}}); }

/// Z = {... -> -1 -> 0 -> 1 -> ...}.
inline TreeProfile z() { return TreeProfile(single_vertex(), true, {{VertexId::core("0"), kRay}}); }

/// Z with one extra leaf omega hanging off 0.
inline TreeProfile zhat() {
  auto core = FiniteTree::from_edges({VertexId::core("0"), VertexId::core(kLeaf)}, {{VertexId::core("0"), VertexId::core(kLeaf)}});
  return TreeProfile(std::move(core), true, {{VertexId::core("0"), kRay}});
}

/// Unilateral weighted shift: lambda_n = prefix[n-1], then tail.
inline ProfileShift unilateral(std::vector<Complex> prefix, double tail) {
  WeightFamily w;
  w.rays[kRay] = {std::move(prefix), tail};
  return ProfileShift(zplus(), std::move(w));
}

/// Bilateral weighted shift: lambda_0 = at_zero, lambda_n = ray_prefix[n-1]
/// for n >= 1, lambda_{-k} = stem_prefix[k-1] for k >= 1, tails beyond.
inline ProfileShift bilateral(Complex at_zero, std::vector<Complex> ray_prefix, double ray_tail,
                              std::vector<Complex> stem_prefix, double stem_tail) {
  WeightFamily w;
  w.core[VertexId::core("0")] = at_zero;
  w.rays[kRay] = {std::move(ray_prefix), ray_tail};
  w.stem = TailedWeights{std::move(stem_prefix), stem_tail};
  return ProfileShift(z(), std::move(w));
}

inline ProfileShift bilateral_constant(double modulus) { return bilateral(modulus, {}, modulus, {}, modulus); }

}  // namespace treeshift::profiles
