#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "treeshift/shift.hpp"

namespace treeshift {

/// Number of moments used when a caller does not say otherwise.
inline constexpr std::int64_t kDefaultMomentCount = 20;
/// Relative tolerance of the Hankel positivity test.
inline constexpr double kHankelTol = 1e-10;

struct MomentSequence {
  std::vector<double> values;
  std::string source;
};

/// Outcome of the finite Hankel test. `order` is the size of H = (s_{i+j}),
/// `shifted_order` the size of H' = (s_{i+j+1}); `minors` are the leading
/// principal minors of H.
struct StieltjesReport {
  bool passes = false;
  std::int64_t order = 0;
  std::int64_t shifted_order = 0;
  double min_eig_H = 0.0;
  double min_eig_H_shifted = 0.0;
  double threshold = 0.0;
  std::vector<double> minors;
};

namespace detail {

inline Eigen::MatrixXd hankel(const std::vector<double>& s, std::int64_t order, std::int64_t offset) {
  Eigen::MatrixXd h(order, order);
  for (std::int64_t i = 0; i < order; ++i) {
    for (std::int64_t j = 0; j < order; ++j) h(i, j) = s[static_cast<std::size_t>(i + j + offset)];
  }
  return h;
}

inline double min_eigenvalue(const Eigen::MatrixXd& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace detail

/// Necessary condition for a Stieltjes moment sequence: both Hankel
/// matrices of the largest order the data supports are positive
/// semidefinite up to -tol * (1 + max s_n).
inline StieltjesReport stieltjes_check(const MomentSequence& s, double tol = kHankelTol) {
  const auto len = static_cast<std::int64_t>(s.values.size());
  if (len < 2) throw DomainError("stieltjes_check needs at least two moments");
  StieltjesReport r;
  r.order = (len - 1) / 2 + 1;
  r.shifted_order = len / 2;
  const auto h = detail::hankel(s.values, r.order, 0);
  const auto hs = detail::hankel(s.values, r.shifted_order, 1);
  r.min_eig_H = detail::min_eigenvalue(h);
  r.min_eig_H_shifted = detail::min_eigenvalue(hs);
  const double scale = 1.0 + *std::max_element(s.values.begin(), s.values.end(),
                                               [](double a, double b) { return std::abs(a) < std::abs(b); });
  r.threshold = -tol * std::abs(scale);
  r.passes = r.min_eig_H >= r.threshold && r.min_eig_H_shifted >= r.threshold;
  for (std::int64_t k = 1; k <= r.order; ++k) r.minors.push_back(h.topLeftCorner(k, k).determinant());
  return r;
}

/// The moments of the point mass at 1 are identically 1.
inline bool delta1_check(const MomentSequence& s, double tol) {
  if (s.values.empty()) throw DomainError("delta1_check needs at least one moment");
  return std::all_of(s.values.begin(), s.values.end(), [&](double x) { return std::abs(x - 1.0) <= tol; });
}

struct Lambda1Report {
  double alpha = 0.0;
  double lambda1_modulus = 0.0;
  MomentSequence moments;
  StieltjesReport stieltjes;
};

/// For a unilateral shift whose weights have constant modulus alpha from
/// index 2 on, the root moments of S / alpha, {1, theta^2, theta^2, ...},
/// pass the Hankel test exactly when theta = |lambda_1| / alpha <= 1.
/// Unnormalized moments grow like alpha^{2n} and swamp the tolerance.
inline Lambda1Report lambda1_bound_report(const ProfileShift& s, std::int64_t count = kDefaultMomentCount,
                                          double tol = kHankelTol) {
  const auto shape = path_shape(s.tree());
  if (shape.shape != PathShape::ZPlusPath) {
    throw PreconditionError("lambda1 bound check needs a Z+ shaped tree, got " + std::string(to_string(shape.shape)));
  }
  const auto& path = *shape.enumeration;
  const double alpha = s.weights().rays.at(path.ray).tail_modulus;
  const auto last = *path.index_of(representative_vertices(s).back());
  for (std::int64_t n = 2; n <= last; ++n) {
    if (!same_modulus(std::abs(s.weight(path.at(n))), alpha)) {
      throw PreconditionError("weight modulus at " + to_string(path.at(n)) + " differs from the tail modulus");
    }
  }
  Lambda1Report r;
  r.alpha = alpha;
  r.lambda1_modulus = std::abs(s.weight(path.at(1)));
  if (alpha > 0.0) {
    r.moments = {moment_sequence(scaled(s, 1.0 / alpha), path.at(0), count), "e_" + to_string(path.at(0)) + " of S/alpha"};
  } else {
    r.moments = {moment_sequence(s, path.at(0), count), "e_" + to_string(path.at(0))};
  }
  r.stieltjes = stieltjes_check(r.moments, tol);
  return r;
}

inline bool lambda1_bound_check(const ProfileShift& s, std::int64_t count = kDefaultMomentCount, double tol = kHankelTol) {
  return lambda1_bound_report(s, count, tol).stieltjes.passes;
}

}  // namespace treeshift
