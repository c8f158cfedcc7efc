#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include "treeshift/classify.hpp"

namespace treeshift {

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Graphviz rendering of a truncated shift. Edges carry |lambda| of their
/// target; zero weights are dashed; edges of the formal-normality witness
/// path are drawn bold red; truncation boundary vertices are boxed.
inline std::string emit_dot(const ProfileShift& s, const Window& window, const std::string& graph_name = "shift") {
  const auto& tree = s.tree();
  if ((tree.has_stem() && window.stem_depth == 0) || (!tree.rays().empty() && window.ray_length == 0)) {
    throw WindowError("profile has infinite parts; give a window with positive stem depth and ray length");
  }
  const auto cut = truncate(tree, window);
  const auto verdict = formal_normality(s);
  auto on_path = [&](const VertexId& v) { return verdict.normal() && verdict.path->index_of(v).has_value(); };

  std::ostringstream os;
  os << "digraph " << detail::dot_quote(graph_name) << " {\n";
  os << "  node [shape=circle];\n";
  for (const auto& v : cut.tree.vertices()) {
    os << "  " << detail::dot_quote(to_string(v));
    if (cut.boundary.contains(v)) os << " [shape=box]";
    os << ";\n";
  }
  for (const auto& [parent, child] : cut.tree.edges()) {
    char label[32];
    std::snprintf(label, sizeof label, "%.6g", std::abs(s.weight(child)));
    os << "  " << detail::dot_quote(to_string(parent)) << " -> " << detail::dot_quote(to_string(child)) << " [label="
       << detail::dot_quote(label);
    if (s.weight(child) == Complex{}) {
      os << ", style=dashed";
    } else if (on_path(parent) && on_path(child)) {
      os << ", color=red, penwidth=2";
    }
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace treeshift
