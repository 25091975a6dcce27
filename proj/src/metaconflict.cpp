#include "dsclust/metaconflict.hpp"

#include <algorithm>
#include <string>

#include "dsclust/error.hpp"

namespace dsclust {

ConflictMatrix::ConflictMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw Error(ErrorCode::Domain, "conflict matrix must be square");
  }
  for (Eigen::Index j = 0; j < n(); ++j) {
    if (entries_(j, j) != 0.0) {
      throw Error(ErrorCode::Domain, "conflict matrix diagonal must be zero");
    }
    for (Eigen::Index k = 0; k < j; ++k) {
      const double c = entries_(j, k);
      if (c != entries_(k, j) || !(c >= 0.0 && c <= 1.0)) {
        throw Error(ErrorCode::Domain,
                    "conflict matrix must be symmetric with entries in [0, 1]");
      }
    }
  }
}

Partition::Partition(std::vector<int> assign, int count)
    : assignment(std::move(assign)), clusters(count) {
  if (clusters < 1) throw Error(ErrorCode::Domain, "partition needs at least one cluster");
  for (int a : assignment) {
    if (a < 0 || a >= clusters) {
      throw Error(ErrorCode::Domain, "cluster index " + std::to_string(a) +
                                         " outside [0, " + std::to_string(clusters) + ")");
    }
  }
}

std::vector<int> Partition::members(int cluster) const {
  std::vector<int> out;
  for (std::size_t m = 0; m < assignment.size(); ++m) {
    if (assignment[m] == cluster) out.push_back(static_cast<int>(m));
  }
  return out;
}

int Partition::nonempty_count() const {
  std::vector<bool> used(static_cast<std::size_t>(clusters), false);
  for (int a : assignment) used[static_cast<std::size_t>(a)] = true;
  return static_cast<int>(std::count(used.begin(), used.end(), true));
}

ConflictMatrix conflict_matrix(std::span<const SimpleSupport> evidence) {
  if (evidence.empty()) throw Error(ErrorCode::Domain, "no evidence");
  const auto n = static_cast<Eigen::Index>(evidence.size());
  Matrix c = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      c(j, k) = c(k, j) = pairwise_conflict(evidence[static_cast<std::size_t>(j)],
                                            evidence[static_cast<std::size_t>(k)]);
    }
  }
  return ConflictMatrix(std::move(c));
}

double cluster_conflict(std::span<const SimpleSupport> evidence,
                        std::span<const int> members) {
  if (members.size() < 2) return 0.0;
  std::vector<MassFunction> bodies;
  bodies.reserve(members.size());
  for (int m : members) {
    if (m < 0 || static_cast<std::size_t>(m) >= evidence.size()) {
      throw Error(ErrorCode::Domain, "member index out of range");
    }
    bodies.push_back(evidence[static_cast<std::size_t>(m)].to_mass_function());
  }
  const int fs = evidence[static_cast<std::size_t>(members.front())].focal.frame_size();
  return combine(fs, bodies).conflict;
}

double metaconflict(double domain_conflict, std::span<const double> cluster_conflicts) {
  double keep = 1.0 - domain_conflict;
  for (double c : cluster_conflicts) keep *= 1.0 - c;
  return 1.0 - keep;
}

McfReport evaluate_partition(std::span<const SimpleSupport> evidence,
                             const Partition& partition, double domain_conflict) {
  if (partition.assignment.size() != evidence.size()) {
    throw Error(ErrorCode::Domain, "partition size does not match evidence count");
  }
  McfReport report;
  report.domain_conflict = domain_conflict;
  report.cluster_conflicts.reserve(static_cast<std::size_t>(partition.clusters));
  for (int i = 0; i < partition.clusters; ++i) {
    const auto members = partition.members(i);
    double c = 1.0;
    try {
      c = cluster_conflict(evidence, members);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TotalConflict) throw;
    }
    report.cluster_conflicts.push_back(c);
  }
  report.mcf = metaconflict(domain_conflict, report.cluster_conflicts);
  return report;
}

}  // namespace dsclust
