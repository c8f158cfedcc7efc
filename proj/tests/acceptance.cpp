// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace {

using namespace treeshift;
using testing::for_each_tree;

const std::string kSpecDir = TREESHIFT_SPEC_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

ShiftSpec load(const std::string& name) { return parse_spec(kSpecDir + "/" + name + ".json"); }

// 1. ||S||^2 equals sup_u sum_{v in Chi(u)} |lambda_v|^2 on random finite trees.
Outcome norm_formula() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_tree(rng, std::uniform_int_distribution<std::size_t>(1, 200)(rng));
    const auto s = testing::random_shift(rng, t);
    const double alpha = norm_sq_bound(s);
    const double on = operator_norm(to_dense(s));
    const double err = std::abs(on * on - alpha) / (1.0 + alpha);
    worst = std::max(worst, err);
    if (err >= 1e-8) o.fail("trial " + std::to_string(trial) + " relative gap " + fmt("%.3e", err));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 30.0) o.fail("took " + fmt("%.1f", secs) + " s");
  if (o.pass) o.detail = "100 trees, worst relative gap " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s";
  return o;
}

// 2. <S e_u, e_v> = conj(<S* e_v, e_u>) on every tree shape up to 8 vertices,
// and S* agrees with the conjugate transpose of the dense matrix.
Outcome adjoint_pairing() {
  Outcome o;
  std::mt19937_64 rng(7);
  double worst = 0.0;
  std::size_t shapes = 0;
  for (std::size_t size = 1; size <= 8; ++size) {
    for_each_tree(size, [&](const FiniteTree& t) {
      ++shapes;
      const auto s = testing::random_shift(rng, t);
      const auto m = to_dense(s);
      const Eigen::MatrixXcd adj = m.matrix.adjoint();
      for (const auto& u : t.vertices()) {
        const auto su = apply(s, SparseVector::basis(u));
        for (const auto& v : t.vertices()) {
          const auto sv = apply_adjoint(s, SparseVector::basis(v));
          const Complex lhs = inner(su, SparseVector::basis(v));
          const Complex rhs = std::conj(inner(sv, SparseVector::basis(u)));
          worst = std::max(worst, std::abs(lhs - rhs));
          worst = std::max(worst, std::abs(sv[u] - adj(m.index(u), m.index(v))));
        }
      }
    });
  }
  if (shapes != 1 + 1 + 2 + 4 + 9 + 20 + 48 + 115) o.fail("enumerated " + std::to_string(shapes) + " shapes");
  if (worst >= 1e-12) o.fail("pairing error " + fmt("%.3e", worst));
  if (o.pass) o.detail = std::to_string(shapes) + " shapes, max error " + fmt("%.2e", worst);
  return o;
}

// 3. Formal normality on Z agrees with the interior commutator defect.
Outcome normality_equivalence() {
  Outcome o;
  std::string summary;
  for (const double a : {0.5, 1.0, 2.0}) {
    const auto s = profiles::bilateral_constant(a);
    const auto v = formal_normality(s);
    if (!v.normal() || std::abs(v.alpha - a) > 1e-12) o.fail("constant Z not normal at alpha " + fmt("%g", a));
    const double d0 = commutator_defect(s, Window{20, 20}).max_interior_defect;
    if (!(d0 < 1e-10)) o.fail("constant Z defect " + fmt("%.3e", d0));

    const auto bumped = profiles::bilateral(a, {a, 2.0 * a}, a, {}, a);
    const auto vb = formal_normality(bumped);
    if (vb.status != NormalityStatus::Not || vb.reason != NormalityFailure::NonconstantModulus) {
      o.fail("perturbed Z verdict wrong at alpha " + fmt("%g", a));
    }
    const double d1 = commutator_defect(bumped, Window{20, 20}).max_interior_defect;
    if (!(d1 >= 3.0 * a * a - 1e-6)) o.fail("perturbed defect " + fmt("%.6g", d1) + " below " + fmt("%.6g", 3.0 * a * a));
    summary += fmt(" a=%g:", a) + fmt(" %.1e/", d0) + fmt("%.6g", d1);
  }
  if (o.pass) o.detail = "defect constant/perturbed" + summary;
  return o;
}

struct CorpusEntry {
  std::string name;
  ExtensionStatus status;
  std::optional<NotModelableReason> reason;
  double alpha;
  double theta;
  NormalityStatus normality;
};

const std::vector<CorpusEntry> kCorpus{
    {"z_constant", ExtensionStatus::BilateralMultiple, std::nullopt, 2.0, 0.0, NormalityStatus::FormallyNormalNormal},
    {"z_nonconstant", ExtensionStatus::NotModelable, NotModelableReason::NonconstantBilateral, 0.0, 0.0, NormalityStatus::Not},
    {"zplus_theta", ExtensionStatus::PerturbedUnilateral, std::nullopt, 1.0, 0.5, NormalityStatus::Not},
    {"zplus_theta_1", ExtensionStatus::PerturbedUnilateral, std::nullopt, 1.0, 1.0, NormalityStatus::Not},
    {"zplus_theta_1_5", ExtensionStatus::NotModelable, NotModelableReason::WeightPattern, 0.0, 0.0, NormalityStatus::Not},
    {"zhat_model", ExtensionStatus::NotModelable, NotModelableReason::ZeroWeight, 0.0, 0.0, NormalityStatus::FormallyNormalNormal},
    {"binary_branching", ExtensionStatus::NotModelable, NotModelableReason::BranchingOrLeaf, 0.0, 0.0, NormalityStatus::Not},
    {"finite_star", ExtensionStatus::NotModelable, NotModelableReason::BranchingOrLeaf, 0.0, 0.0, NormalityStatus::Not},
};

// 4. Corpus verdicts, random branching profiles, sibling orthogonality.
Outcome trichotomy() {
  Outcome o;
  for (const auto& e : kCorpus) {
    const auto spec = load(e.name);
    const auto v = classify_extension(spec.shift);
    if (v.status != e.status || v.reason != e.reason || std::abs(v.alpha - e.alpha) > 1e-12 ||
        std::abs(v.theta - e.theta) > 1e-12 || formal_normality(spec.shift).status != e.normality) {
      o.fail(e.name + " -> " + to_string(v.status));
    }
  }
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = testing::random_branching_profile(rng);
    const auto v = classify_extension(s);
    if (v.status != ExtensionStatus::NotModelable || v.reason != NotModelableReason::BranchingOrLeaf) {
      o.fail("random branching profile " + std::to_string(trial) + " -> " + to_string(v.status));
    }
    for (const auto& u : branching_vertices(s.tree())) {
      const auto kids = s.tree().children(u);
      for (std::size_t i = 0; i < kids.size(); ++i) {
        for (std::size_t j = i + 1; j < kids.size(); ++j) {
          for (std::int64_t k = 0; k <= 6; ++k) {
            const auto a = power_apply(s, kids[i], k);
            for (std::int64_t l = 0; l <= 6; ++l) worst = std::max(worst, std::abs(inner(a, power_apply(s, kids[j], l))));
          }
        }
      }
    }
  }
  if (worst >= 1e-12) o.fail("orthogonality error " + fmt("%.3e", worst));
  if (o.pass) o.detail = "8 corpus specs, 50 branching profiles, max |<S^k e_u1, S^l e_u2>| " + fmt("%.1e", worst);
  return o;
}

// 5. The extension model on Z with a leaf hosts the perturbed unilateral shift.
Outcome extension_model() {
  Outcome o;
  double worst = 0.0;
  for (const double theta : {0.1, 0.5, 0.9, 1.0}) {
    const auto s = profiles::unilateral({theta}, 1.0);
    const auto model = build_extension_model(1.0, theta);
    const auto r = verify_extension(s, model, 30, 1e-12);
    worst = std::max({worst, r.gram_residual, r.invariance_residual, r.restriction_residual, r.source_residual});
    if (!r.passed()) o.fail("checks failed at theta " + fmt("%g", theta));
    if (r.restriction_weights.size() != 30) o.fail("restriction has " + std::to_string(r.restriction_weights.size()) + " weights");
    for (std::size_t i = 0; i < r.restriction_weights.size(); ++i) {
      const double expected = i == 0 ? theta : 1.0;
      const auto w = r.restriction_weights[i];
      if (round12(w.real()) != round12(expected) || round12(w.imag()) != 0.0) {
        o.fail("restriction weight " + std::to_string(i) + " at theta " + fmt("%g", theta));
      }
    }
    const auto nv = formal_normality(model.shift);
    if (!nv.normal() || std::abs(nv.alpha - 1.0) > 1e-12) o.fail("model not normal at theta " + fmt("%g", theta));
  }
  if (o.pass) o.detail = "theta 0.1, 0.5, 0.9, 1 at window 30, max residual " + fmt("%.1e", worst);
  return o;
}

// 6. Hankel test on the root moments tracks theta <= 1.
Outcome moment_bound() {
  Outcome o;
  int agreed = 0;
  for (int i = 1; i <= 20; ++i) {
    const double theta = 0.1 * i;
    const bool admissible = theta <= 1.0 + 1e-9;
    for (const double alpha : {0.5, 1.0, 2.0}) {
      const auto s = profiles::unilateral({theta * alpha}, alpha);
      const bool hankel = lambda1_bound_check(s);
      const bool modelable = classify_extension(s).status == ExtensionStatus::PerturbedUnilateral;
      if (hankel != admissible || modelable != admissible) {
        o.fail("disagreement at theta " + fmt("%.1f", theta) + " alpha " + fmt("%g", alpha));
      } else {
        ++agreed;
      }
    }
  }
  const auto r = lambda1_bound_report(profiles::unilateral({1.5}, 1.0));
  const auto& m = r.moments.values;
  const double by_hand = m[0] * m[2] - m[1] * m[1];
  if (r.stieltjes.passes) o.fail("theta 1.5 passes the Hankel test");
  if (r.stieltjes.minors.size() < 2 || round12(r.stieltjes.minors[1]) != -2.8125 || round12(by_hand) != -2.8125) {
    o.fail("2x2 minor not -2.8125");
  }
  if (o.pass) o.detail = std::to_string(agreed) + "/60 grid points agree, theta 1.5 minor " + fmt12(r.stieltjes.minors[1]);
  return o;
}

// 7. Verdicts survive unit-modulus reweighting; scaling by c moves alpha to
// |c| alpha, norms and defects by |c|^2, and nothing else.
Outcome invariance() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> angle(-3.14159, 3.14159);
  std::size_t checks = 0;
  for (const auto& e : kCorpus) {
    const auto spec = load(e.name);
    const auto& s = spec.shift;
    const auto base_x = classify_extension(s);
    const auto base_n = formal_normality(s);
    const auto window = Window{8, 8};
    const double base_d = commutator_defect(s, window).max_interior_defect;
    const double base_norm = norm_sq_bound(s);
    for (int rep = 0; rep < 3; ++rep) {
      for (const double c : {1.0, 0.5, 3.0}) {
        std::map<VertexId, double> phases;
        const auto t = rephased(scaled(s, std::polar(c, angle(rng))),
                                [&](const VertexId& v) { return phases.emplace(v, angle(rng)).first->second; });
        const auto x = classify_extension(t);
        const auto nv = formal_normality(t);
        const double d = commutator_defect(t, window).max_interior_defect;
        ++checks;
        const bool same = x.status == base_x.status && x.reason == base_x.reason && x.at == base_x.at &&
                          std::abs(x.alpha - c * base_x.alpha) <= 1e-12 * (1.0 + c) && std::abs(x.theta - base_x.theta) <= 1e-12 &&
                          nv.status == base_n.status && nv.reason == base_n.reason && nv.at == base_n.at &&
                          std::abs(nv.alpha - c * base_n.alpha) <= 1e-12 * (1.0 + c) &&
                          std::abs(norm_sq_bound(t) - c * c * base_norm) <= 1e-12 * (1.0 + c * c * base_norm) &&
                          std::abs(d - c * c * base_d) <= 1e-10 * (1.0 + c * c * base_d) && is_injective(t) == is_injective(s);
        if (!same) o.fail(e.name + " changes under scale " + fmt("%g", c));
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checks) + " gauge/scale transforms over the corpus";
  return o;
}

// 8. Reports are byte-identical across runs.
Outcome determinism() {
  Outcome o;
  std::string all_a;
  std::string all_b;
  for (const auto& e : kCorpus) {
    const auto path = kSpecDir + "/" + e.name + ".json";
    const auto a = run_classify(parse_spec(path), ClassifyOptions{}, path);
    const auto b = run_classify(parse_spec(path), ClassifyOptions{}, path);
    all_a += to_json(a).dump(2) + to_text(a);
    all_b += to_json(b).dump(2) + to_text(b);
  }
  if (all_a != all_b) o.fail("reports differ between runs");
  if (o.pass) o.detail = std::to_string(all_a.size()) + " report bytes identical across two runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"norm formula", norm_formula},
      {"adjoint pairing", adjoint_pairing},
      {"formal normality vs commutator", normality_equivalence},
      {"trichotomy", trichotomy},
      {"extension model", extension_model},
      {"moment bound", moment_bound},
      {"invariance", invariance},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("criterion %zu (%s): %s: %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
