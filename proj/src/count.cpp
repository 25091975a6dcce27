#include "dsclust/count.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsclust/error.hpp"

namespace dsclust {

namespace {
constexpr double kTotalConflict = 1.0 - 1e-12;
}

void PriorSpec::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::Domain, "prior p must be in (0, 1)");
  if (max_count < 1) throw Error(ErrorCode::Domain, "prior needs at least one count");
}

Vector PriorSpec::masses() const {
  validate();
  Vector m(max_count);
  for (int r = 0; r < max_count; ++r) m(r) = std::pow(p, 2.0 * r);
  return m / m.sum();
}

ClusterExistence cluster_existence(std::span<const SimpleSupport> evidence,
                                   const Eigen::Ref<const Vector>& v_column) {
  if (static_cast<std::size_t>(v_column.size()) != evidence.size()) {
    throw Error(ErrorCode::Domain, "voltage column does not match the evidence count");
  }
  ClusterExistence out;
  if (evidence.empty()) return out;

  const int fs = evidence.front().focal.frame_size();
  std::vector<MassFunction> bodies;
  bodies.reserve(evidence.size());
  double product = 1.0;
  for (std::size_t m = 0; m < evidence.size(); ++m) {
    const double v = v_column(static_cast<Eigen::Index>(m));
    bodies.push_back(discount_by_voltage(evidence[m], v));
    product *= 1.0 - v * evidence[m].mass;
  }
  try {
    out.theta = combine(fs, bodies).combined.theta_mass();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TotalConflict) throw;
    // Normalize by the clamped conflict instead.
    out.theta = std::min(1.0, product / (1.0 - kTotalConflict));
    out.meaningless = true;
  }
  out.support = 1.0 - out.theta;
  return out;
}

AtLeastDistribution at_least_distribution(std::span<const double> supports) {
  const auto r_max = static_cast<Eigen::Index>(supports.size());
  // dist(r) = probability that exactly r clusters exist.
  Vector dist = Vector::Zero(r_max + 1);
  dist(0) = 1.0;
  for (Eigen::Index i = 0; i < r_max; ++i) {
    const double a = supports[static_cast<std::size_t>(i)];
    if (!(a >= 0.0 && a <= 1.0)) {
      throw Error(ErrorCode::Domain, "cluster support must be in [0, 1]");
    }
    for (Eigen::Index r = i + 1; r >= 1; --r) {
      dist(r) = dist(r) * (1.0 - a) + dist(r - 1) * a;
    }
    dist(0) *= 1.0 - a;
  }
  return {dist.tail(r_max), dist(0)};
}

CountPosterior posterior_counts(const AtLeastDistribution& evidence, const PriorSpec& prior) {
  const Vector m = prior.masses();
  const Eigen::Index r_max = m.size();
  if (evidence.at_least.size() > r_max) {
    throw Error(ErrorCode::Domain, "count evidence exceeds the prior's maximum count");
  }
  Vector at_least = Vector::Zero(r_max);
  at_least.head(evidence.at_least.size()) = evidence.at_least;

  // {|X| = r} and {|X| >= j} intersect iff j <= r.
  CountPosterior out;
  out.posterior.resize(r_max);
  double cumulative = evidence.theta_mass;
  double conflict = 0.0;
  for (Eigen::Index r = 0; r < r_max; ++r) {
    cumulative += at_least(r);
    out.posterior(r) = m(r) * cumulative;
    conflict += m(r) * at_least.tail(r_max - r - 1).sum();
  }
  if (conflict >= kTotalConflict) {
    throw Error(ErrorCode::TotalConflict, "count evidence totally conflicts with the prior");
  }
  out.conflict = conflict;
  // Equal to 1 - conflict in exact arithmetic; stabler when conflict is near 1.
  out.posterior /= out.posterior.sum();
  return out;
}

Vector gradual_determination(const Vector& posterior, double alpha) {
  if (posterior.size() == 0) return posterior;
  Eigen::Index best = 0;
  for (Eigen::Index r = 1; r < posterior.size(); ++r) {
    if (posterior(r) > posterior(best)) best = r;
  }
  Vector gd = alpha * posterior;
  gd(best) += 1.0 - alpha;
  return gd;
}

CountState compute_count_state(std::span<const SimpleSupport> evidence,
                               const NetworkState& state, const PriorSpec& prior,
                               double alpha) {
  if (static_cast<std::size_t>(state.rows()) != evidence.size()) {
    throw Error(ErrorCode::Domain, "network rows do not match the evidence count");
  }
  CountState cs;
  cs.alpha = alpha;
  std::vector<double> supports;
  supports.reserve(static_cast<std::size_t>(state.cols()));
  for (Eigen::Index n = 0; n < state.cols(); ++n) {
    cs.existence.push_back(cluster_existence(evidence, state.v.col(n)));
    supports.push_back(cs.existence.back().support);
  }
  cs.at_least = at_least_distribution(supports);
  cs.posterior = posterior_counts(cs.at_least, prior);
  cs.gd = gradual_determination(cs.posterior.posterior, alpha);
  return cs;
}

}  // namespace dsclust
