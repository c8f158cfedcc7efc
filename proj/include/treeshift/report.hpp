#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "treeshift/classify.hpp"
#include "treeshift/dense.hpp"
#include "treeshift/io.hpp"
#include "treeshift/moments.hpp"

namespace treeshift {

inline constexpr double kDefaultTol = 1e-9;
inline const Window kDefaultWindow{32, 32};

/// Rounds to 12 significant digits so reports are stable across platforms.
inline double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", round12(x));
  return buf;
}

/// Tolerance from TREESHIFT_TOL if set and valid, else the default.
inline double default_tolerance() {
  if (const char* env = std::getenv("TREESHIFT_TOL")) {
    char* end = nullptr;
    const double t = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(t) && t > 0.0) return t;
  }
  return kDefaultTol;
}

struct ClassifyOptions {
  Window window = kDefaultWindow;
  double tol = kDefaultTol;
  std::int64_t moment_count = kDefaultMomentCount;
};

struct NormOracle {
  double symbolic = 0.0;        // alpha of the full shift
  double truncated = 0.0;       // alpha of the truncated shift
  double dense_norm_sq = 0.0;   // largest singular value squared
  double gap = 0.0;             // |dense - truncated|
  double threshold = 0.0;
  bool covers_skeleton = false;  // truncated == symbolic is then expected
  bool agrees() const { return gap <= threshold; }
};

struct MomentSummary {
  Lambda1Report lambda1;
  bool symbolic_bound = false;  // |lambda_1| <= alpha
  bool delta1_after_top = false;
  std::vector<double> normalized_next;  // ||S^n e_{u1}||^2 / alpha^{2n}
};

struct Report {
  std::string source;
  std::string name;
  SpecKind kind = SpecKind::Profile;
  ClassifyOptions options;

  double norm_sq_bound = 0.0;
  bool injective = false;
  PathShape shape = PathShape::NotAPath;
  FormalNormalityVerdict normality;
  ExtensionVerdict extension;

  CommutatorDefect defect;
  double defect_threshold = 0.0;
  NormOracle norm;
  std::optional<MomentSummary> moments;

  bool normality_agrees() const { return normality.status == NormalityStatus::Not ? !defect.within_tolerance() : defect.within_tolerance(); }
  bool moments_agree() const { return !moments || moments->lambda1.stieltjes.passes == moments->symbolic_bound; }
  bool oracles_agree() const { return normality_agrees() && norm.agrees() && moments_agree(); }
};

inline Report run_classify(const ShiftSpec& spec, const ClassifyOptions& opt, std::string source = {}) {
  const auto& s = spec.shift;
  Report r;
  r.source = std::move(source);
  r.name = spec.name;
  r.kind = spec.kind;
  r.options = opt;
  r.norm_sq_bound = norm_sq_bound(s);
  r.injective = is_injective(s);
  r.shape = path_shape(s.tree()).shape;
  r.normality = formal_normality(s, opt.tol);
  r.extension = classify_extension(s, true, opt.tol);

  const auto cut = truncate(s.tree(), opt.window);
  const auto finite = restrict_to(s, cut.tree);
  r.defect_threshold = opt.tol * (1.0 + r.norm_sq_bound);
  r.defect = commutator_defect(s, opt.window, r.defect_threshold);

  r.norm.symbolic = r.norm_sq_bound;
  r.norm.truncated = norm_sq_bound(finite);
  const double on = operator_norm(to_dense(finite));
  r.norm.dense_norm_sq = on * on;
  r.norm.gap = std::abs(r.norm.dense_norm_sq - r.norm.truncated);
  r.norm.threshold = 1e-8 * (1.0 + r.norm.truncated);
  const auto sk = skeleton_window(s);
  r.norm.covers_skeleton = opt.window.stem_depth >= sk.stem_depth && opt.window.ray_length >= sk.ray_length;

  if (r.shape == PathShape::ZPlusPath) {
    try {
      MomentSummary m;
      m.lambda1 = lambda1_bound_report(s, opt.moment_count);
      const double a = m.lambda1.alpha;
      m.symbolic_bound = a > 0.0 && (m.lambda1.lambda1_modulus <= a || same_modulus(m.lambda1.lambda1_modulus, a, opt.tol));
      if (a > 0.0) {
        const auto path = *path_shape(s.tree()).enumeration;
        const auto next = moment_sequence(s, path.at(1), opt.moment_count);
        double scale = 1.0;
        for (const double x : next) {
          m.normalized_next.push_back(x / scale);
          scale *= a * a;
        }
        m.delta1_after_top = delta1_check({m.normalized_next, "e_" + to_string(path.at(1))}, opt.tol);
      }
      r.moments = std::move(m);
    } catch (const PreconditionError&) {
      // Tail not constant from index 2: the moment bound does not apply.
    }
  }
  return r;
}

inline nlohmann::json path_json(const PathEnumeration& p) {
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& v : p.core_chain) chain.push_back(to_string(v));
  return {{"bilateral", p.bilateral}, {"core_chain", chain}, {"ray", p.ray}};
}

inline nlohmann::json to_json(const Report& r) {
  using nlohmann::json;
  json j;
  j["source"] = r.source;
  j["name"] = r.name;
  j["kind"] = r.kind == SpecKind::Finite ? "finite" : "profile";
  j["window"] = {{"stem_depth", r.options.window.stem_depth}, {"ray_length", r.options.window.ray_length}};
  j["tolerance"] = round12(r.options.tol);
  j["norm_sq_bound"] = round12(r.norm_sq_bound);
  j["injective"] = r.injective;
  j["path_shape"] = to_string(r.shape);

  json fn = {{"status", to_string(r.normality.status)}};
  if (r.normality.normal()) {
    fn["alpha"] = round12(r.normality.alpha);
    fn["path"] = path_json(*r.normality.path);
  }
  if (r.normality.reason) fn["reason"] = to_string(*r.normality.reason);
  if (r.normality.at) fn["at"] = to_string(*r.normality.at);
  j["formal_normality"] = fn;

  json ext = {{"status", to_string(r.extension.status)},
              {"note", "necessary weight pattern only; subnormality is not certified"}};
  if (r.extension.status != ExtensionStatus::NotModelable) ext["alpha"] = round12(r.extension.alpha);
  if (r.extension.status == ExtensionStatus::PerturbedUnilateral) ext["theta"] = round12(r.extension.theta);
  if (r.extension.reason) ext["reason"] = to_string(*r.extension.reason);
  if (r.extension.at) ext["at"] = to_string(*r.extension.at);
  j["extension"] = ext;

  json cd = {{"max_interior_defect", round12(r.defect.max_interior_defect)},
             {"interior_vertices", r.defect.interior.size()},
             {"threshold", round12(r.defect_threshold)},
             {"numerically_normal", r.defect.within_tolerance()},
             {"window", {{"stem_depth", r.options.window.stem_depth}, {"ray_length", r.options.window.ray_length}}}};
  if (r.defect.argmax) cd["argmax"] = to_string(*r.defect.argmax);
  json no = {{"symbolic", round12(r.norm.symbolic)},
             {"truncated", round12(r.norm.truncated)},
             {"dense_norm_sq", round12(r.norm.dense_norm_sq)},
             {"gap", round12(r.norm.gap)},
             {"threshold", round12(r.norm.threshold)},
             {"window_covers_skeleton", r.norm.covers_skeleton}};
  j["oracles"] = {{"commutator", cd}, {"norm", no}};

  if (r.moments) {
    const auto& m = *r.moments;
    json minors = json::array();
    for (const double x : m.lambda1.stieltjes.minors) minors.push_back(round12(x));
    json head = json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(6, m.lambda1.moments.values.size()); ++i) {
      head.push_back(round12(m.lambda1.moments.values[i]));
    }
    j["moments"] = {{"source", m.lambda1.moments.source},
                    {"count", m.lambda1.moments.values.size()},
                    {"leading_values", head},
                    {"hankel_order", m.lambda1.stieltjes.order},
                    {"shifted_hankel_order", m.lambda1.stieltjes.shifted_order},
                    {"min_eig_H", round12(m.lambda1.stieltjes.min_eig_H)},
                    {"min_eig_H_shifted", round12(m.lambda1.stieltjes.min_eig_H_shifted)},
                    {"hankel_minors", minors},
                    {"stieltjes_passes", m.lambda1.stieltjes.passes},
                    {"lambda1_within_alpha", m.symbolic_bound},
                    {"delta1_after_top", m.delta1_after_top}};
  }
  j["agreement"] = {{"normality", r.normality_agrees()}, {"norm", r.norm.agrees()}, {"moments", r.moments_agree()}};
  return j;
}

inline std::string to_text(const Report& r) {
  std::ostringstream os;
  os << "== " << (r.name.empty() ? r.source : r.name) << " (" << (r.kind == SpecKind::Finite ? "finite" : "profile") << ")\n";
  os << "  window (" << r.options.window.stem_depth << "," << r.options.window.ray_length << "), tol " << fmt12(r.options.tol) << "\n";
  os << "  norm^2 bound      " << fmt12(r.norm_sq_bound) << "\n";
  os << "  injective         " << (r.injective ? "yes" : "no") << "\n";
  os << "  path shape        " << to_string(r.shape) << "\n";
  os << "  formal normality  " << to_string(r.normality.status);
  if (r.normality.normal()) os << " (alpha " << fmt12(r.normality.alpha) << ")";
  if (r.normality.reason) os << " (" << to_string(*r.normality.reason) << (r.normality.at ? " at " + to_string(*r.normality.at) : "") << ")";
  os << "\n  extension         " << to_string(r.extension.status);
  if (r.extension.status == ExtensionStatus::BilateralMultiple) os << " (alpha " << fmt12(r.extension.alpha) << ")";
  if (r.extension.status == ExtensionStatus::PerturbedUnilateral) {
    os << " (alpha " << fmt12(r.extension.alpha) << ", theta " << fmt12(r.extension.theta) << ")";
  }
  if (r.extension.reason) os << " (" << to_string(*r.extension.reason) << (r.extension.at ? " at " + to_string(*r.extension.at) : "") << ")";
  os << "\n  commutator defect " << fmt12(r.defect.max_interior_defect) << " over " << r.defect.interior.size()
     << " interior vertices (threshold " << fmt12(r.defect_threshold) << ")\n";
  os << "  norm oracle       dense " << fmt12(r.norm.dense_norm_sq) << " vs truncated " << fmt12(r.norm.truncated)
     << ", gap " << fmt12(r.norm.gap) << "\n";
  if (r.moments) {
    const auto& st = r.moments->lambda1.stieltjes;
    os << "  moments at " << r.moments->lambda1.moments.source << ": Hankel order " << st.order << ", min eig "
       << fmt12(st.min_eig_H) << " / " << fmt12(st.min_eig_H_shifted) << ", " << (st.passes ? "passes" : "fails") << "\n";
  }
  os << "  oracles agree     " << (r.oracles_agree() ? "yes" : "NO") << "\n";
  return os.str();
}

}  // namespace treeshift
