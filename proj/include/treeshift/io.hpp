#pragma once

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "treeshift/shift.hpp"

namespace treeshift {

/// Malformed or schema-violating shift specification. `field` is a dotted
/// path into the document (empty for syntax errors).
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class SpecKind { Finite, Profile };

/// A parsed spec file. Finite trees are held as profiles without stem or
/// rays; `kind` remembers which layout to write back.
struct ShiftSpec {
  std::string name;
  SpecKind kind = SpecKind::Profile;
  ProfileShift shift;

  friend bool operator==(const ShiftSpec&, const ShiftSpec&) = default;
};

namespace io_detail {

using nlohmann::json;

inline void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw SpecError(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SpecError(where.empty() ? key : where + "." + key, "unknown field");
  }
}

inline const json& required(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw SpecError(where.empty() ? key : where + "." + key, "missing field");
  return obj.at(key);
}

inline std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SpecError(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SpecError(where, "expected a finite number");
  return x;
}

/// A weight is either a bare nonnegative modulus or an [re, im] pair.
inline Complex weight(const json& j, const std::string& where) {
  if (j.is_number()) {
    const double m = number(j, where);
    if (m < 0.0) throw SpecError(where, "bare weights are moduli and must be nonnegative; use [re, im]");
    return {m, 0.0};
  }
  if (j.is_array() && j.size() == 2) return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
  throw SpecError(where, "expected a nonnegative number or an [re, im] pair");
}

inline VertexId core_vertex(const json& j, const std::string& where) {
  if (!j.is_string()) throw SpecError(where, "expected a vertex name");
  const auto name = j.get<std::string>();
  if (name.empty() || name.find_first_of("[]") != std::string::npos) throw SpecError(where, "invalid core vertex name '" + name + "'");
  return VertexId::core(name);
}

inline FiniteTree finite_tree(const json& obj, const std::string& where) {
  std::set<VertexId> vertices;
  const auto& vs = required(obj, where, "vertices");
  if (!vs.is_array()) throw SpecError(join(where, "vertices"), "expected an array");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto field = join(where, "vertices") + "[" + std::to_string(i) + "]";
    if (!vertices.insert(core_vertex(vs[i], field)).second) throw SpecError(field, "duplicate vertex");
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  if (obj.contains("edges")) {
    const auto& es = obj.at("edges");
    if (!es.is_array()) throw SpecError(join(where, "edges"), "expected an array");
    for (std::size_t i = 0; i < es.size(); ++i) {
      const auto field = join(where, "edges") + "[" + std::to_string(i) + "]";
      if (!es[i].is_array() || es[i].size() != 2) throw SpecError(field, "expected a [parent, child] pair");
      edges.emplace_back(core_vertex(es[i][0], field + "[0]"), core_vertex(es[i][1], field + "[1]"));
    }
  }
  try {
    auto tree = FiniteTree::from_edges(std::move(vertices), edges);
    if (obj.contains("root") && core_vertex(obj.at("root"), join(where, "root")) != tree.root()) {
      throw SpecError(join(where, "root"), "declared root is not the root of the edge set (" + to_string(tree.root()) + ")");
    }
    return tree;
  } catch (const DomainError& e) {
    throw SpecError(where.empty() ? "edges" : where, e.what());
  }
}

inline TailedWeights tailed(const json& obj, const std::string& where) {
  TailedWeights t;
  if (obj.contains("prefix")) {
    const auto& p = obj.at("prefix");
    if (!p.is_array()) throw SpecError(join(where, "prefix"), "expected an array");
    for (std::size_t i = 0; i < p.size(); ++i) t.prefix.push_back(weight(p[i], join(where, "prefix") + "[" + std::to_string(i) + "]"));
  }
  t.tail_modulus = number(required(obj, where, "tail_modulus"), join(where, "tail_modulus"));
  if (t.tail_modulus < 0.0) throw SpecError(join(where, "tail_modulus"), "must be nonnegative");
  return t;
}

inline std::map<VertexId, Complex> core_weights(const json& obj, const FiniteTree& tree, bool root_weighted) {
  std::map<VertexId, Complex> out;
  if (!obj.contains("weights")) return out;
  const auto& ws = obj.at("weights");
  if (!ws.is_object()) throw SpecError("weights", "expected an object keyed by vertex");
  for (const auto& [key, value] : ws.items()) {
    const auto field = "weights." + key;
    const auto v = VertexId::core(key);
    if (!tree.contains(v)) throw SpecError(field, "unknown vertex");
    if (!root_weighted && v == tree.root()) throw SpecError(field, "the root carries no weight");
    out.emplace(v, weight(value, field));
  }
  for (const auto& v : tree.vertices()) {
    if ((root_weighted || v != tree.root()) && !out.contains(v)) throw SpecError("weights." + v.name, "missing weight");
  }
  return out;
}

inline json weight_json(Complex c) {
  if (c.imag() == 0.0 && !std::signbit(c.real())) return c.real();
  return json::array({c.real(), c.imag()});
}

inline json tailed_json(const TailedWeights& t) {
  json prefix = json::array();
  for (const auto& c : t.prefix) prefix.push_back(weight_json(c));
  return {{"prefix", prefix}, {"tail_modulus", t.tail_modulus}};
}

inline json tree_json(const FiniteTree& tree) {
  json vs = json::array();
  for (const auto& v : tree.vertices()) vs.push_back(v.name);
  json es = json::array();
  for (const auto& [p, c] : tree.edges()) es.push_back({p.name, c.name});
  return {{"vertices", vs}, {"edges", es}, {"root", tree.root().name}};
}

}  // namespace io_detail

inline ShiftSpec parse_spec_json(const nlohmann::json& doc) {
  using namespace io_detail;
  if (!doc.is_object()) throw SpecError("", "top level must be an object");
  const auto& kind = required(doc, "", "kind");
  if (!kind.is_string()) throw SpecError("kind", "expected \"finite\" or \"profile\"");
  const std::string name = doc.contains("name") && doc.at("name").is_string() ? doc.at("name").get<std::string>() : "";
  if (doc.contains("name") && !doc.at("name").is_string()) throw SpecError("name", "expected a string");

  if (kind == "finite") {
    only_keys(doc, "", {"kind", "name", "vertices", "edges", "root", "weights"});
    auto tree = finite_tree(doc, "");
    WeightFamily w;
    w.core = core_weights(doc, tree, false);
    return {name, SpecKind::Finite, ProfileShift(TreeProfile(std::move(tree)), std::move(w))};
  }
  if (kind != "profile") throw SpecError("kind", "expected \"finite\" or \"profile\"");

  only_keys(doc, "", {"kind", "name", "core", "stem", "rays", "weights"});
  const auto& core_obj = required(doc, "", "core");
  only_keys(core_obj, "core", {"vertices", "edges", "root"});
  auto core = finite_tree(core_obj, "core");

  WeightFamily w;
  const bool has_stem = doc.contains("stem") && !doc.at("stem").is_null();
  if (has_stem) {
    only_keys(doc.at("stem"), "stem", {"prefix", "tail_modulus"});
    w.stem = tailed(doc.at("stem"), "stem");
  }
  std::vector<RayAttachment> rays;
  if (doc.contains("rays")) {
    const auto& rs = doc.at("rays");
    if (!rs.is_array()) throw SpecError("rays", "expected an array");
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const auto field = "rays[" + std::to_string(i) + "]";
      only_keys(rs[i], field, {"name", "attach", "prefix", "tail_modulus"});
      const auto& rn = required(rs[i], field, "name");
      if (!rn.is_string()) throw SpecError(field + ".name", "expected a string");
      const auto ray_name = rn.get<std::string>();
      const auto attach = core_vertex(required(rs[i], field, "attach"), field + ".attach");
      if (w.rays.contains(ray_name)) throw SpecError(field + ".name", "duplicate ray name");
      w.rays[ray_name] = tailed(rs[i], field);
      rays.push_back({attach, ray_name});
    }
  }
  w.core = core_weights(doc, core, has_stem);
  try {
    TreeProfile profile(std::move(core), has_stem, std::move(rays));
    return {name, SpecKind::Profile, ProfileShift(std::move(profile), std::move(w))};
  } catch (const DomainError& e) {
    throw SpecError("rays", e.what());
  }
}

inline ShiftSpec parse_spec_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError("", e.what());
  }
  return parse_spec_json(doc);
}

inline ShiftSpec parse_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

inline nlohmann::json to_json(const ShiftSpec& spec) {
  using namespace io_detail;
  const auto& tree = spec.shift.tree();
  const auto& w = spec.shift.weights();
  json weights = json::object();
  for (const auto& [v, c] : w.core) weights[v.name] = weight_json(c);

  json doc;
  if (!spec.name.empty()) doc["name"] = spec.name;
  if (spec.kind == SpecKind::Finite) {
    doc = tree_json(tree.core());
    if (!spec.name.empty()) doc["name"] = spec.name;
    doc["kind"] = "finite";
    doc["weights"] = weights;
    return doc;
  }
  doc["kind"] = "profile";
  doc["core"] = tree_json(tree.core());
  if (w.stem) doc["stem"] = tailed_json(*w.stem);
  json rays = json::array();
  for (const auto& r : tree.rays()) {
    json ray = tailed_json(w.rays.at(r.name));
    ray["name"] = r.name;
    ray["attach"] = r.attach.name;
    rays.push_back(ray);
  }
  doc["rays"] = rays;
  doc["weights"] = weights;
  return doc;
}

inline std::string serialize(const ShiftSpec& spec) { return to_json(spec).dump(2) + "\n"; }

}  // namespace treeshift
