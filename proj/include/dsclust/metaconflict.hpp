#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "dsclust/evidence.hpp"
#include "dsclust/types.hpp"

namespace dsclust {

/// Symmetric matrix of pairwise conflicts c_jk with a zero diagonal.
class ConflictMatrix {
 public:
  explicit ConflictMatrix(Matrix entries);

  Eigen::Index n() const noexcept { return entries_.rows(); }
  double operator()(Eigen::Index j, Eigen::Index k) const { return entries_(j, k); }
  const Matrix& matrix() const noexcept { return entries_; }

 private:
  Matrix entries_;
};

/// Assignment of each piece of evidence to one of `clusters` slots.
struct Partition {
  std::vector<int> assignment;
  int clusters = 0;

  Partition() = default;
  Partition(std::vector<int> assignment, int clusters);

  std::vector<int> members(int cluster) const;
  int nonempty_count() const;
};

struct McfReport {
  std::vector<double> cluster_conflicts;
  double domain_conflict = 0.0;
  double mcf = 0.0;
};

inline constexpr double kMaxConflict = 1.0 - 1e-12;

ConflictMatrix conflict_matrix(std::span<const SimpleSupport> evidence);

/// -ln(1 - c) with c clamped below 1 so the weight stays finite.
template <typename Scalar>
Scalar conflict_weight(Scalar c) {
  using std::log1p;
  using std::min;
  return -log1p(-min(c, Scalar(kMaxConflict)));
}

/// Entrywise conflict weights; usable on any Eigen expression.
template <typename Derived>
auto conflict_weights(const Eigen::MatrixBase<Derived>& conflicts) {
  using Scalar = typename Derived::Scalar;
  return conflicts.unaryExpr([](Scalar c) { return conflict_weight(c); });
}

/// Conflict of Dempster's rule over the member pieces of evidence.
double cluster_conflict(std::span<const SimpleSupport> evidence,
                        std::span<const int> members);

/// 1 - (1 - c0) * prod(1 - c_i).
double metaconflict(double domain_conflict, std::span<const double> cluster_conflicts);

/// Scores a partition. A cluster whose combination is totally conflicting
/// contributes c_i = 1.
McfReport evaluate_partition(std::span<const SimpleSupport> evidence,
                             const Partition& partition, double domain_conflict);

}  // namespace dsclust
