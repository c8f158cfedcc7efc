#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "treeshift/shift.hpp"

namespace treeshift {

/// A shift materialized on an ordered vertex basis; column j is S e_{basis[j]}.
struct DenseOperator {
  std::vector<VertexId> basis;
  Eigen::MatrixXcd matrix;

  Eigen::Index index(const VertexId& v) const {
    const auto it = std::lower_bound(basis.begin(), basis.end(), v);
    if (it == basis.end() || *it != v) throw DomainError("vertex " + to_string(v) + " is not in the dense basis");
    return static_cast<Eigen::Index>(it - basis.begin());
  }

  Eigen::VectorXcd column_of(const SparseVector& f) const {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (const auto& [v, c] : f.entries()) x(index(v)) = c;
    return x;
  }
};

/// M[v][u] = lambda_v when par(v) = u inside `finite`. The basis follows
/// the VertexId order.
template <DirectedTree Tree>
DenseOperator to_dense(const WeightedShift<Tree>& s, const FiniteTree& finite) {
  DenseOperator op;
  op.basis.assign(finite.vertices().begin(), finite.vertices().end());
  const auto n = static_cast<Eigen::Index>(op.basis.size());
  op.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [child, par] : finite.parent_map()) op.matrix(op.index(child), op.index(par)) = s.weight(child);
  return op;
}

inline DenseOperator to_dense(const FiniteShift& s) { return to_dense(s, s.tree()); }

/// Largest singular value.
inline double operator_norm(const DenseOperator& m) {
  if (m.matrix.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m.matrix);
  return svd.singularValues()(0);
}

}  // namespace treeshift
