#pragma once

#include <span>
#include <vector>

#include "dsclust/annealer.hpp"
#include "dsclust/evidence.hpp"
#include "dsclust/types.hpp"

namespace dsclust {

/// Prior over the number of clusters, m(|X| = r) proportional to p^(2(r-1)).
struct PriorSpec {
  double p = 0.8;
  int max_count = 6;

  void validate() const;
  /// Normalized masses for r = 1..max_count.
  Vector masses() const;
};

struct ClusterExistence {
  double support = 0.0;  // m(X_i in X)
  double theta = 1.0;    // m(Theta)
  bool meaningless = false;
};

struct AtLeastDistribution {
  Vector at_least;  // entry r-1 holds m(|X| >= r)
  double theta_mass = 1.0;
};

struct CountPosterior {
  Vector posterior;  // entry r-1 holds m*(|X| = r)
  double conflict = 0.0;
};

/// Every intermediate of one pass from the voltage grid to gd.
struct CountState {
  std::vector<ClusterExistence> existence;
  AtLeastDistribution at_least;
  CountPosterior posterior;
  double alpha = 1.0;
  Vector gd;

  double c0() const noexcept { return posterior.conflict; }
};

/// Support for the existence of one cluster: every piece of evidence is
/// discounted by its output voltage in the column and all are combined.
ClusterExistence cluster_existence(std::span<const SimpleSupport> evidence,
                                   const Eigen::Ref<const Vector>& v_column);

/// Distribution of the number of existing clusters, grouped from the
/// conjunction evidence by size (a Poisson-binomial convolution).
AtLeastDistribution at_least_distribution(std::span<const double> supports);

/// Dempster combination of the prior with the {|X| >= r} evidence.
CountPosterior posterior_counts(const AtLeastDistribution& evidence, const PriorSpec& prior);

/// Blends the posterior with a one-hot at its argmax; alpha = 1 keeps the
/// posterior, alpha = 0 is a final determination.
Vector gradual_determination(const Vector& posterior, double alpha);

CountState compute_count_state(std::span<const SimpleSupport> evidence,
                               const NetworkState& state, const PriorSpec& prior,
                               double alpha);

}  // namespace dsclust
