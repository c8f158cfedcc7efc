#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treeshift/errors.hpp"
#include "treeshift/vertex.hpp"

namespace treeshift {

/// Any directed tree addressable by VertexId. Children are returned sorted.
template <class T>
concept DirectedTree = requires(const T& t, const VertexId& v) {
  { t.contains(v) } -> std::same_as<bool>;
  { t.children(v) } -> std::same_as<std::vector<VertexId>>;
  { t.parent(v) } -> std::same_as<std::optional<VertexId>>;
};

/// Expansion depth for the infinite parts of a TreeProfile.
struct Window {
  std::int64_t stem_depth = 0;
  std::int64_t ray_length = 0;

  Window() = default;
  Window(std::int64_t stem, std::int64_t ray) : stem_depth(stem), ray_length(ray) {
    if (stem < 0 || ray < 0) throw DomainError("window extents must be nonnegative");
  }
  friend bool operator==(const Window&, const Window&) = default;
};

inline bool in_window(const Window& w, const VertexId& v) {
  switch (v.kind) {
    case VertexKind::Core:
      return true;
    case VertexKind::Stem:
      return v.index >= -w.stem_depth;
    case VertexKind::Ray:
      return v.index <= w.ray_length;
  }
  return false;
}

/// A finite rooted directed tree: every vertex but the root has exactly one
/// parent, and following parents from any vertex reaches the root.
class FiniteTree {
 public:
  FiniteTree(std::set<VertexId> vertices, std::map<VertexId, VertexId> parent_map)
      : vertices_(std::move(vertices)), parent_(std::move(parent_map)) {
    if (vertices_.empty()) throw DomainError("a directed tree needs at least one vertex");
    for (const auto& [child, par] : parent_) {
      if (!vertices_.contains(child) || !vertices_.contains(par)) {
        throw DomainError("edge (" + to_string(par) + ", " + to_string(child) + ") leaves the vertex set");
      }
      if (child == par) throw DomainError("self loop at " + to_string(child));
      children_[par].push_back(child);
    }
    std::optional<VertexId> root;
    for (const auto& v : vertices_) {
      if (parent_.contains(v)) continue;
      if (root) throw DomainError("tree has two roots: " + to_string(*root) + " and " + to_string(v));
      root = v;
    }
    if (!root) throw DomainError("tree has no root (contains a cycle)");
    root_ = *root;
    // Every vertex must reach the root in fewer than |V| steps.
    for (const auto& v : vertices_) {
      VertexId cur = v;
      std::size_t steps = 0;
      while (cur != root_) {
        cur = parent_.at(cur);
        if (++steps > vertices_.size()) throw DomainError("cycle through " + to_string(v));
      }
    }
    for (auto& [_, kids] : children_) std::sort(kids.begin(), kids.end());
  }

  static FiniteTree from_edges(std::set<VertexId> vertices, const std::vector<std::pair<VertexId, VertexId>>& edges) {
    std::map<VertexId, VertexId> parent;
    for (const auto& [from, to] : edges) {
      if (!parent.emplace(to, from).second) {
        throw DomainError("vertex " + to_string(to) + " has two parents");
      }
    }
    return FiniteTree(std::move(vertices), std::move(parent));
  }

  const std::set<VertexId>& vertices() const { return vertices_; }
  const std::map<VertexId, VertexId>& parent_map() const { return parent_; }
  const VertexId& root() const { return root_; }
  std::size_t size() const { return vertices_.size(); }

  bool contains(const VertexId& v) const { return vertices_.contains(v); }

  std::vector<VertexId> children(const VertexId& u) const {
    require(u);
    const auto it = children_.find(u);
    return it == children_.end() ? std::vector<VertexId>{} : it->second;
  }

  std::optional<VertexId> parent(const VertexId& u) const {
    require(u);
    const auto it = parent_.find(u);
    if (it == parent_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::pair<VertexId, VertexId>> edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (const auto& [child, par] : parent_) out.emplace_back(par, child);
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const FiniteTree& a, const FiniteTree& b) {
    return a.vertices_ == b.vertices_ && a.parent_ == b.parent_;
  }

 private:
  void require(const VertexId& u) const {
    if (!contains(u)) throw DomainError("unknown vertex " + to_string(u));
  }

  std::set<VertexId> vertices_;
  std::map<VertexId, VertexId> parent_;
  std::map<VertexId, std::vector<VertexId>> children_;
  VertexId root_;
};

struct RayAttachment {
  VertexId attach;
  std::string name;
  friend bool operator==(const RayAttachment&, const RayAttachment&) = default;
};

/// A possibly infinite directed tree described by a finite core, an
/// optional stem (a copy of the negative integers feeding into the core
/// root) and any number of rays (copies of the positive integers hanging
/// off core vertices). A profile with a stem is rootless.
class TreeProfile {
 public:
  TreeProfile(FiniteTree core, bool stem, std::vector<RayAttachment> rays)
      : core_(std::move(core)), stem_(stem), rays_(std::move(rays)) {
    for (const auto& v : core_.vertices()) {
      if (!v.is_core()) throw DomainError("profile core may only hold core vertices, got " + to_string(v));
      if (v.name.find_first_of("[]") != std::string::npos) {
        throw DomainError("core vertex name may not contain brackets: " + v.name);
      }
    }
    std::sort(rays_.begin(), rays_.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      const auto& r = rays_[i];
      if (r.name.empty() || r.name == "stem" || r.name.find_first_of("[]") != std::string::npos) {
        throw DomainError("invalid ray name '" + r.name + "'");
      }
      if (i > 0 && rays_[i - 1].name == r.name) throw DomainError("duplicate ray name '" + r.name + "'");
      if (!core_.contains(r.attach)) throw DomainError("ray '" + r.name + "' attaches to unknown vertex " + to_string(r.attach));
    }
  }

  /// A finite tree viewed as a profile with no stem and no rays.
  explicit TreeProfile(FiniteTree core) : TreeProfile(std::move(core), false, {}) {}

  const FiniteTree& core() const { return core_; }
  bool has_stem() const { return stem_; }
  const std::vector<RayAttachment>& rays() const { return rays_; }
  bool is_finite() const { return !stem_ && rays_.empty(); }

  std::optional<VertexId> root() const {
    if (stem_) return std::nullopt;
    return core_.root();
  }

  const RayAttachment* find_ray(const std::string& name) const {
    for (const auto& r : rays_) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  bool contains(const VertexId& v) const {
    switch (v.kind) {
      case VertexKind::Core:
        return core_.contains(v);
      case VertexKind::Stem:
        return stem_ && v.index <= -1;
      case VertexKind::Ray:
        return v.index >= 1 && find_ray(v.name) != nullptr;
    }
    return false;
  }

  std::vector<VertexId> children(const VertexId& u) const {
    require(u);
    switch (u.kind) {
      case VertexKind::Stem:
        return {u.index == -1 ? core_.root() : VertexId::stem(u.index + 1)};
      case VertexKind::Ray:
        return {VertexId::ray(u.name, u.index + 1)};
      case VertexKind::Core: {
        auto out = core_.children(u);
        for (const auto& r : rays_) {
          if (r.attach == u) out.push_back(VertexId::ray(r.name, 1));
        }
        std::sort(out.begin(), out.end());
        return out;
      }
    }
    return {};
  }

  std::optional<VertexId> parent(const VertexId& u) const {
    require(u);
    switch (u.kind) {
      case VertexKind::Stem:
        return VertexId::stem(u.index - 1);
      case VertexKind::Ray:
        if (u.index == 1) return find_ray(u.name)->attach;
        return VertexId::ray(u.name, u.index - 1);
      case VertexKind::Core:
        if (u == core_.root()) {
          if (stem_) return VertexId::stem(-1);
          return std::nullopt;
        }
        return core_.parent(u);
    }
    return std::nullopt;
  }

  friend bool operator==(const TreeProfile&, const TreeProfile&) = default;

 private:
  void require(const VertexId& u) const {
    if (!contains(u)) throw DomainError("unknown vertex " + to_string(u));
  }

  FiniteTree core_;
  bool stem_ = false;
  std::vector<RayAttachment> rays_;
};

// ---------------------------------------------------------------------------
// Combinatorics

/// par^n(u); nullopt once the chain passes the root.
template <DirectedTree Tree>
std::optional<VertexId> iter_parent(const Tree& tree, const VertexId& u, std::int64_t n) {
  if (n < 0) throw DomainError("iter_parent needs n >= 0");
  if (!tree.contains(u)) throw DomainError("unknown vertex " + to_string(u));
  std::optional<VertexId> cur = u;
  for (std::int64_t i = 0; i < n && cur; ++i) cur = tree.parent(*cur);
  return cur;
}

template <DirectedTree Tree>
std::set<VertexId> children_of_set(const Tree& tree, const std::set<VertexId>& level) {
  std::set<VertexId> next;
  for (const auto& v : level) {
    for (auto& c : tree.children(v)) next.insert(std::move(c));
  }
  return next;
}

/// n-fold iterated children of u. Finite on profiles for every n, since
/// every vertex has finitely many children.
template <DirectedTree Tree>
std::set<VertexId> chi_n(const Tree& tree, const VertexId& u, std::int64_t n) {
  if (n < 0) throw DomainError("chi_n needs n >= 0");
  if (!tree.contains(u)) throw DomainError("unknown vertex " + to_string(u));
  std::set<VertexId> level{u};
  for (std::int64_t i = 0; i < n && !level.empty(); ++i) level = children_of_set(tree, level);
  return level;
}

/// Descendants of u grouped by generation; levels[n] is chi_n(u).
struct Descendants {
  std::vector<std::set<VertexId>> levels;

  std::set<VertexId> all() const {
    std::set<VertexId> out;
    for (const auto& l : levels) out.insert(l.begin(), l.end());
    return out;
  }
};

inline Descendants descendants(const FiniteTree& tree, const VertexId& u) {
  Descendants d;
  std::set<VertexId> level = chi_n(tree, u, 0);
  while (!level.empty()) {
    d.levels.push_back(level);
    level = children_of_set(tree, level);
  }
  return d;
}

/// Descendants of u inside the window. Rays are cut at window.ray_length.
inline Descendants descendants(const TreeProfile& tree, const VertexId& u, const Window& window) {
  if (!tree.contains(u)) throw DomainError("unknown vertex " + to_string(u));
  if (!in_window(window, u)) throw WindowError("vertex " + to_string(u) + " lies outside the window");
  Descendants d;
  std::set<VertexId> level{u};
  while (!level.empty()) {
    d.levels.push_back(level);
    std::set<VertexId> next;
    for (const auto& v : level) {
      for (auto& c : tree.children(v)) {
        if (in_window(window, c)) next.insert(std::move(c));
      }
    }
    level = std::move(next);
  }
  return d;
}

inline bool is_leafless(const FiniteTree& tree) {
  return std::all_of(tree.vertices().begin(), tree.vertices().end(),
                     [&](const VertexId& v) { return !tree.children(v).empty(); });
}

/// Stem and ray vertices always have a child, so only the core is checked.
inline bool is_leafless(const TreeProfile& tree) {
  const auto& vs = tree.core().vertices();
  return std::all_of(vs.begin(), vs.end(), [&](const VertexId& v) { return !tree.children(v).empty(); });
}

inline std::set<VertexId> branching_vertices(const FiniteTree& tree) {
  std::set<VertexId> out;
  for (const auto& v : tree.vertices()) {
    if (tree.children(v).size() >= 2) out.insert(v);
  }
  return out;
}

inline std::set<VertexId> branching_vertices(const TreeProfile& tree) {
  std::set<VertexId> out;
  for (const auto& v : tree.core().vertices()) {
    if (tree.children(v).size() >= 2) out.insert(v);
  }
  return out;
}

/// Deepest vertex having both u1 and u2 among its descendants.
inline VertexId common_ancestor(const FiniteTree& tree, const VertexId& u1, const VertexId& u2) {
  std::set<VertexId> ancestors;
  for (std::optional<VertexId> cur = u1; cur; cur = tree.parent(*cur)) ancestors.insert(*cur);
  for (std::optional<VertexId> cur = u2; cur; cur = tree.parent(*cur)) {
    if (ancestors.contains(*cur)) return *cur;
  }
  throw DomainError("vertices have no common ancestor");
}

// ---------------------------------------------------------------------------
// Path shapes

enum class PathShape { ZPlusPath, ZPath, NotAPath };

inline const char* to_string(PathShape s) {
  switch (s) {
    case PathShape::ZPlusPath:
      return "ZPlusPath";
    case PathShape::ZPath:
      return "ZPath";
    case PathShape::NotAPath:
      return "NotAPath";
  }
  return "?";
}

/// Order isomorphism between Z (bilateral) or Z+ (unilateral) and a path
/// running down a profile: negative indices walk the stem, 0 is the core
/// root, then the core chain, then the ray.
struct PathEnumeration {
  bool bilateral = false;
  std::vector<VertexId> core_chain;
  std::string ray;

  VertexId at(std::int64_t n) const {
    if (n < 0) {
      if (!bilateral) throw DomainError("unilateral path has no negative indices");
      return VertexId::stem(n);
    }
    const auto m = static_cast<std::int64_t>(core_chain.size());
    if (n < m) return core_chain[static_cast<std::size_t>(n)];
    return VertexId::ray(ray, n - m + 1);
  }

  std::optional<std::int64_t> index_of(const VertexId& v) const {
    switch (v.kind) {
      case VertexKind::Stem:
        if (bilateral && v.index <= -1) return v.index;
        return std::nullopt;
      case VertexKind::Core: {
        const auto it = std::find(core_chain.begin(), core_chain.end(), v);
        if (it == core_chain.end()) return std::nullopt;
        return static_cast<std::int64_t>(it - core_chain.begin());
      }
      case VertexKind::Ray:
        if (v.name != ray) return std::nullopt;
        return static_cast<std::int64_t>(core_chain.size()) + v.index - 1;
    }
    return std::nullopt;
  }

  friend bool operator==(const PathEnumeration&, const PathEnumeration&) = default;
};

struct PathShapeResult {
  PathShape shape = PathShape::NotAPath;
  std::optional<PathEnumeration> enumeration;
};

inline PathShapeResult path_shape(const TreeProfile& profile) {
  if (!is_leafless(profile) || !branching_vertices(profile).empty()) return {};
  // Leafless with no branching: the core is a chain whose last vertex
  // carries the single ray.
  PathEnumeration e;
  e.bilateral = profile.has_stem();
  VertexId cur = profile.core().root();
  while (true) {
    e.core_chain.push_back(cur);
    const auto kids = profile.children(cur);
    if (kids.front().is_ray()) {
      e.ray = kids.front().name;
      break;
    }
    cur = kids.front();
  }
  return {e.bilateral ? PathShape::ZPath : PathShape::ZPlusPath, std::move(e)};
}

// ---------------------------------------------------------------------------
// Truncation

/// A finite cut of a profile. `boundary` holds the vertices whose profile
/// neighbourhood (parent and children) is not entirely inside `tree`.
struct Truncation {
  FiniteTree tree;
  std::set<VertexId> boundary;
};

inline Truncation truncate(const TreeProfile& profile, const Window& window) {
  std::set<VertexId> vertices = profile.core().vertices();
  if (profile.has_stem()) {
    for (std::int64_t k = 1; k <= window.stem_depth; ++k) vertices.insert(VertexId::stem(-k));
  }
  for (const auto& r : profile.rays()) {
    for (std::int64_t k = 1; k <= window.ray_length; ++k) vertices.insert(VertexId::ray(r.name, k));
  }
  std::map<VertexId, VertexId> parent;
  std::set<VertexId> boundary;
  for (const auto& v : vertices) {
    const auto p = profile.parent(v);
    if (p && vertices.contains(*p)) {
      parent.emplace(v, *p);
    } else if (p) {
      boundary.insert(v);
    }
    for (const auto& c : profile.children(v)) {
      if (!vertices.contains(c)) boundary.insert(v);
    }
  }
  return {FiniteTree(std::move(vertices), std::move(parent)), std::move(boundary)};
}

}  // namespace treeshift
