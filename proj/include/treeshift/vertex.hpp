#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "treeshift/errors.hpp"

namespace treeshift {

/// Kinds are declared in basis order: stem vertices sort first, then core
/// vertices, then ray vertices.
enum class VertexKind : std::uint8_t { Stem = 0, Core = 1, Ray = 2 };

/// Symbolic vertex address inside a TreeProfile (or a FiniteTree).
///
/// - core(name): a vertex of the finite core.
/// - stem(k), k <= 0: the stem vertex k steps above the core root
///   (stem(-1) is the parent of the core root).
/// - ray(name, k), k >= 1: the k-th vertex of the named ray.
///
/// Ordering is lexicographic on (kind, name, index); for stems this puts
/// deeper vertices first.
struct VertexId {
  VertexKind kind = VertexKind::Core;
  std::string name;
  std::int64_t index = 0;

  static VertexId core(std::string name) { return {VertexKind::Core, std::move(name), 0}; }

  static VertexId stem(std::int64_t index) {
    if (index > 0) throw DomainError("stem index must be <= 0, got " + std::to_string(index));
    return {VertexKind::Stem, {}, index};
  }

  static VertexId ray(std::string name, std::int64_t index) {
    if (index < 1) throw DomainError("ray index must be >= 1, got " + std::to_string(index));
    return {VertexKind::Ray, std::move(name), index};
  }

  bool is_core() const { return kind == VertexKind::Core; }
  bool is_stem() const { return kind == VertexKind::Stem; }
  bool is_ray() const { return kind == VertexKind::Ray; }

  friend auto operator<=>(const VertexId&, const VertexId&) = default;
  friend bool operator==(const VertexId&, const VertexId&) = default;
};

/// Text form: core vertices print as their name, stem vertices as
/// `stem[-k]`, ray vertices as `name[k]`.
inline std::string to_string(const VertexId& v) {
  switch (v.kind) {
    case VertexKind::Core:
      return v.name;
    case VertexKind::Stem:
      return "stem[" + std::to_string(v.index) + "]";
    case VertexKind::Ray:
      return v.name + "[" + std::to_string(v.index) + "]";
  }
  return {};
}

inline std::ostream& operator<<(std::ostream& os, const VertexId& v) { return os << to_string(v); }

/// Inverse of to_string. Names containing '[' are not valid core names.
inline VertexId parse_vertex(std::string_view text) {
  if (text.empty()) throw DomainError("empty vertex id");
  const auto open = text.find('[');
  if (open == std::string_view::npos) {
    if (text.find(']') != std::string_view::npos) {
      throw DomainError("malformed vertex id '" + std::string(text) + "'");
    }
    return VertexId::core(std::string(text));
  }
  if (text.back() != ']' || open == 0) {
    throw DomainError("malformed vertex id '" + std::string(text) + "'");
  }
  const auto name = text.substr(0, open);
  const auto digits = text.substr(open + 1, text.size() - open - 2);
  std::int64_t index = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw DomainError("malformed vertex index in '" + std::string(text) + "'");
  }
  if (name == "stem") return VertexId::stem(index);
  return VertexId::ray(std::string(name), index);
}

}  // namespace treeshift
