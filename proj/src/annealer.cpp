#include "dsclust/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsclust/error.hpp"

namespace dsclust {

void HyperParams::validate() const {
  if (!(gain > 0.0)) throw Error(ErrorCode::Domain, "gain must be positive");
  if (!(sigmoid_scale > 0.0)) throw Error(ErrorCode::Domain, "sigmoid scale must be positive");
  if (!(noise_amplitude >= 0.0)) {
    throw Error(ErrorCode::Domain, "noise amplitude must be non-negative");
  }
  if (max_iterations < 1) throw Error(ErrorCode::Domain, "max_iterations must be at least 1");
  if (!(off_threshold >= 0.0 && off_threshold < on_threshold && on_threshold <= 1.0)) {
    throw Error(ErrorCode::Domain, "need 0 <= off_threshold < on_threshold <= 1");
  }
}

NetworkState init_state(int n_evidence, int n_clusters, const HyperParams& params, Rng& rng) {
  params.validate();
  if (n_evidence < 1) throw Error(ErrorCode::Domain, "need at least one piece of evidence");
  if (n_clusters < 2) {
    throw Error(ErrorCode::Domain, "need at least two columns, got " + std::to_string(n_clusters));
  }
  const double u0 = params.sigmoid_scale;
  const double u00 = u0 * std::atanh(2.0 / n_clusters - 1.0);
  const double half_width = params.noise_amplitude * u0;

  NetworkState s;
  s.u.resize(n_evidence, n_clusters);
  // Row-major draw order, fixed for reproducibility.
  for (Eigen::Index m = 0; m < s.u.rows(); ++m) {
    for (Eigen::Index n = 0; n < s.u.cols(); ++n) {
      s.u(m, n) = u00 + (half_width > 0.0 ? rng.uniform(-half_width, half_width) : 0.0);
    }
  }
  s.v = output_voltage(s.u.array(), u0).matrix();
  s.t = 0;
  s.entropy0 = raw_entropy(s.v);
  return s;
}

Matrix column_coupling(const ConflictMatrix& conflicts, const HyperParams& params) {
  Matrix a = (params.data_inhibition * conflict_weights(conflicts.matrix())).array() +
             params.global_inhibition;
  if (!params.self_coupling) a.diagonal().setZero();
  return a;
}

Vector domain_drive(const Vector& gd, DomainTerm term) {
  if (term == DomainTerm::Literal) return gd;
  Vector drive(gd.size());
  double below = 0.0;
  for (Eigen::Index n = 0; n < gd.size(); ++n) {
    drive(n) = below;
    below += gd(n);
  }
  return drive;
}

NetworkState step(const NetworkState& state, const ConflictMatrix& conflicts,
                  const Vector& gd, const HyperParams& params) {
  if (conflicts.n() != state.rows()) {
    throw Error(ErrorCode::Domain, "conflict matrix does not match the number of rows");
  }
  return step_coupled(state, column_coupling(conflicts, params), gd, params);
}

NetworkState step_coupled(const NetworkState& state, const Matrix& coupling,
                          const Vector& gd, const HyperParams& params) {
  if (coupling.rows() != state.rows() || coupling.cols() != state.rows()) {
    throw Error(ErrorCode::Domain, "coupling matrix does not match the number of rows");
  }
  if (gd.size() != state.cols()) {
    throw Error(ErrorCode::Domain, "gd must have one entry per column");
  }
  for (Eigen::Index r = 0; r < gd.size(); ++r) {
    if (!(gd(r) >= 0.0 && gd(r) <= 1.0 + 1e-12)) {
      throw Error(ErrorCode::Domain, "gd entries must lie in [0, 1]");
    }
  }

  const Matrix& v = state.v;
  // Column term: sum over rows i of coupling(m, i) * V_in.
  Matrix column_term = coupling * v;
  // Row term: (ri + gi) * sum over the other columns of row m.
  Matrix row_term = (params.row_inhibition + params.global_inhibition) *
                    (v.rowwise().sum().replicate(1, v.cols()) - v);
  Eigen::RowVectorX<double> domain_term =
      (params.domain_inhibition + params.global_inhibition) *
      domain_drive(gd, params.domain_term).transpose();

  Matrix input = column_term + row_term;
  input.rowwise() += domain_term;
  input.array() += params.excitation_bias;

  NetworkState next;
  next.u = state.u + params.gain * (input - state.u);
  next.v = output_voltage(next.u.array(), params.sigmoid_scale).matrix();
  next.t = state.t + 1;
  next.entropy0 = state.entropy0;
  return next;
}

double raw_entropy(const Matrix& v) {
  return v.unaryExpr([](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }).sum();
}

EntropyReading entropy(const NetworkState& state) {
  if (!(state.entropy0 > 0.0)) {
    throw Error(ErrorCode::DegenerateStart,
                "initial entropy is zero; cannot normalize");
  }
  EntropyReading r;
  r.raw = raw_entropy(state.v);
  r.alpha = std::clamp(r.raw / state.entropy0, 0.0, 1.0);
  return r;
}

bool is_crisp(const NetworkState& state, const HyperParams& params) {
  for (Eigen::Index m = 0; m < state.rows(); ++m) {
    int on = 0;
    for (Eigen::Index n = 0; n < state.cols(); ++n) {
      const double x = state.v(m, n);
      if (x >= params.on_threshold) {
        ++on;
      } else if (x > params.off_threshold) {
        return false;
      }
    }
    if (on != 1) return false;
  }
  return true;
}

bool has_converged(const NetworkState& state, const HyperParams& params) {
  return state.t >= params.max_iterations || is_crisp(state, params);
}

Partition extract_partition(const NetworkState& state) {
  std::vector<int> assignment(static_cast<std::size_t>(state.rows()));
  for (Eigen::Index m = 0; m < state.rows(); ++m) {
    Eigen::Index best = 0;
    for (Eigen::Index n = 1; n < state.cols(); ++n) {
      if (state.v(m, n) > state.v(m, best)) best = n;
    }
    assignment[static_cast<std::size_t>(m)] = static_cast<int>(best);
  }
  return Partition(std::move(assignment), static_cast<int>(state.cols()));
}

}  // namespace dsclust
