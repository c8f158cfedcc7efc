// treeshift: classify weighted shifts on directed trees from spec files.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "treeshift/treeshift.hpp"

namespace {

using namespace treeshift;

enum ExitCode : int { kOk = 0, kParse = 1, kPrecondition = 2, kDisagreement = 3 };

Window parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--window", "expected H,R");
  try {
    return Window(std::stoll(text.substr(0, comma)), std::stoll(text.substr(comma + 1)));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--window", "expected two nonnegative integers H,R");
  }
}

int run_classify_cmd(const std::vector<std::string>& specs, const std::string& window_text, double tol, bool strict,
                     const std::string& json_out) {
  ClassifyOptions opt;
  opt.tol = tol;
  if (!window_text.empty()) opt.window = parse_window(window_text);

  nlohmann::json reports = nlohmann::json::array();
  std::size_t disagreements = 0;
  for (const auto& path : specs) {
    const auto spec = parse_spec(path);
    Report r;
    try {
      r = run_classify(spec, opt, path);
    } catch (const WindowError& e) {
      throw WindowError(path + ": " + e.what() + " (try a larger --window H,R)");
    }
    std::cout << to_text(r);
    if (!r.oracles_agree()) ++disagreements;
    reports.push_back(to_json(r));
  }
  std::cout << "classified " << specs.size() << " spec(s); oracle disagreements: " << disagreements << "\n";
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    if (!out) throw std::runtime_error("cannot write " + json_out);
    out << nlohmann::json{{"reports", reports}, {"disagreements", disagreements}}.dump(2) << "\n";
  }
  return strict && disagreements > 0 ? kDisagreement : kOk;
}

int run_verify_cmd(const std::string& path, std::int64_t window, double tol) {
  const auto spec = parse_spec(path);
  const auto verdict = classify_extension(spec.shift);
  if (verdict.status == ExtensionStatus::BilateralMultiple) {
    std::cout << "BilateralMultiple (alpha " << fmt12(verdict.alpha) << "): the shift is normal and is its own extension model\n";
    return kOk;
  }
  if (verdict.status != ExtensionStatus::PerturbedUnilateral) {
    throw PreconditionError(std::string("no weighted-shift extension model: ") + to_string(verdict.status) + " (" +
                            to_string(*verdict.reason) + ")");
  }
  const auto model = build_extension_model(verdict.alpha, verdict.theta);
  const auto r = verify_extension(spec.shift, model, window, tol);
  auto line = [](const char* what, bool ok, double residual) {
    std::cout << "  " << (ok ? "PASS " : "FAIL ") << what << " (residual " << fmt12(residual) << ")\n";
  };
  std::cout << "PerturbedUnilateral (alpha " << fmt12(r.alpha) << ", theta " << fmt12(r.theta) << "), window " << r.window
            << ", tol " << fmt12(r.tol) << "\n";
  line("(a) embedded vectors orthonormal", r.orthonormal(), r.gram_residual);
  line("(b) N maps the span into itself", r.invariant(), r.invariance_residual);
  line("(c) restriction is the unilateral shift", r.restriction_matches(), std::max(r.restriction_residual, r.source_residual));
  std::cout << "  " << (r.model_normal ? "PASS " : "FAIL ") << "(d) model N is formally normal\n";
  std::cout << "  " << (r.isometry_consistent ? "PASS " : "FAIL ") << "(e) shift is " << (r.source_isometric ? "" : "not ")
            << "an isometry after scaling\n";
  std::cout << "  restriction weights:";
  for (std::size_t i = 0; i < std::min<std::size_t>(5, r.restriction_weights.size()); ++i) {
    std::cout << " " << fmt12(r.restriction_weights[i].real());
  }
  std::cout << " ...\n" << (r.passed() ? "all checks passed\n" : "some checks FAILED\n");
  return r.passed() ? kOk : kDisagreement;
}

int run_moments_cmd(const std::string& path, const std::string& vertex, std::int64_t count, double tol) {
  const auto spec = parse_spec(path);
  const auto u = parse_vertex(vertex);
  const MomentSequence m{moment_sequence(spec.shift, u, count), "e_" + to_string(u)};
  std::cout << "moments ||S^n e_" << to_string(u) << "||^2, n = 0.." << count - 1 << ":\n";
  for (std::size_t i = 0; i < m.values.size(); ++i) std::cout << "  s_" << i << " = " << fmt12(m.values[i]) << "\n";
  std::cout << "delta_1 moments: " << (delta1_check(m, tol) ? "yes" : "no") << "\n";
  if (m.values.size() >= 2) {
    const auto st = stieltjes_check(m);
    std::cout << "Hankel test (order " << st.order << ", shifted order " << st.shifted_order << "): min eig "
              << fmt12(st.min_eig_H) << " / " << fmt12(st.min_eig_H_shifted) << " -> " << (st.passes ? "passes" : "fails")
              << "\n  leading minors:";
    for (const double x : st.minors) std::cout << " " << fmt12(x);
    std::cout << "\n";
  }
  return kOk;
}

int run_dot_cmd(const std::string& path, const std::string& out_path, const std::string& window_text) {
  const auto spec = parse_spec(path);
  const Window window = window_text.empty() ? Window{8, 8} : parse_window(window_text);
  const auto dot = emit_dot(spec.shift, window, spec.name.empty() ? "shift" : spec.name);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << dot;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted shifts on directed trees: normality, extension models and numeric oracles"};
  app.require_subcommand(1);
  double tol = default_tolerance();

  auto* classify = app.add_subcommand("classify", "Classify shifts and cross-check with dense oracles");
  std::vector<std::string> classify_specs;
  std::string classify_window;
  std::string json_out;
  bool strict = false;
  classify->add_option("specs", classify_specs, "Spec files")->required()->check(CLI::ExistingFile);
  classify->add_option("--window", classify_window, "Truncation window H,R (stem depth, ray length); default 32,32");
  classify->add_option("--tol", tol, "Tolerance (default 1e-9, or TREESHIFT_TOL)");
  classify->add_flag("--strict", strict, "Exit 3 when symbolic and numeric verdicts disagree");
  classify->add_option("--json", json_out, "Write the JSON report here");

  auto* verify = app.add_subcommand("verify-extension", "Build and check the normal extension model");
  std::string verify_spec;
  std::int64_t verify_window = 30;
  double verify_tol = 1e-12;
  verify->add_option("spec", verify_spec, "Spec file")->required()->check(CLI::ExistingFile);
  verify->add_option("--window", verify_window, "Number of embedded basis vectors checked")->check(CLI::PositiveNumber);
  verify->add_option("--tol", verify_tol, "Residual tolerance");

  auto* moments = app.add_subcommand("moments", "Print ||S^n e_u||^2 and the Hankel test");
  std::string moments_spec;
  std::string vertex;
  std::int64_t count = kDefaultMomentCount;
  moments->add_option("spec", moments_spec, "Spec file")->required()->check(CLI::ExistingFile);
  moments->add_option("--vertex", vertex, "Vertex id, e.g. 0, z[3], stem[-2]")->required();
  moments->add_option("--count", count, "Number of moments")->required()->check(CLI::PositiveNumber);
  moments->add_option("--tol", tol, "Tolerance for the delta_1 test");

  auto* dot = app.add_subcommand("dot", "Write a Graphviz rendering of a truncation");
  std::string dot_spec;
  std::string dot_out;
  std::string dot_window;
  dot->add_option("spec", dot_spec, "Spec file")->required()->check(CLI::ExistingFile);
  dot->add_option("--out", dot_out, "Output .dot file")->required();
  dot->add_option("--window", dot_window, "Truncation window H,R; default 8,8");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*classify) return run_classify_cmd(classify_specs, classify_window, tol, strict, json_out);
    if (*verify) return run_verify_cmd(verify_spec, verify_window, verify_tol);
    if (*moments) return run_moments_cmd(moments_spec, vertex, count, tol);
    if (*dot) return run_dot_cmd(dot_spec, dot_out, dot_window);
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kParse;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const WindowError& e) {
    std::cerr << "window error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  return kOk;
}
