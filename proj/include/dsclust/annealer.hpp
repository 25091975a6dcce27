#pragma once

#include <cstdint>

#include "dsclust/metaconflict.hpp"
#include "dsclust/rng.hpp"
#include "dsclust/types.hpp"

namespace dsclust {

/// How the count distribution drives column n (0-based) of the network.
enum class DomainTerm {
  /// Belief that fewer than n + 1 clusters exist: sum of gd over counts 1..n.
  Cumulative,
  /// gd of count n + 1 itself.
  Literal,
};

struct HyperParams {
  double gain = 1e-5;                 // eta
  double data_inhibition = -2000.0;   // dti
  double row_inhibition = -500.0;     // ri
  double domain_inhibition = -2000.0; // Dti
  double global_inhibition = -200.0;  // gi
  double excitation_bias = 1800.0;    // eb
  double sigmoid_scale = 0.02;        // u0
  double noise_amplitude = 0.1;       // half-width of init noise, in units of u0
  int max_iterations = 1000;
  double on_threshold = 0.99;
  double off_threshold = 0.01;
  DomainTerm domain_term = DomainTerm::Cumulative;
  bool self_coupling = true;
  std::uint64_t seed = 0;

  /// Throws Domain on an invalid combination.
  void validate() const;
};

/// Input and output voltages of the rows x columns neuron grid.
struct NetworkState {
  Matrix u;
  Matrix v;
  int t = 0;
  double entropy0 = 0.0;

  Eigen::Index rows() const noexcept { return u.rows(); }
  Eigen::Index cols() const noexcept { return u.cols(); }
};

struct EntropyReading {
  double raw = 0.0;
  double alpha = 0.0;
};

/// V = (1 + tanh(u / u0)) / 2.
template <typename Scalar>
Scalar output_voltage(Scalar u, Scalar u0) {
  using std::tanh;
  return Scalar(0.5) * (Scalar(1) + tanh(u / u0));
}

template <typename Derived>
auto output_voltage(const Eigen::ArrayBase<Derived>& u, typename Derived::Scalar u0) {
  using Scalar = typename Derived::Scalar;
  return Scalar(0.5) * (Scalar(1) + (u / u0).tanh());
}

/// Every input voltage starts at u0 * atanh(2 / columns - 1) plus uniform
/// noise, so every output voltage starts near 1 / columns.
NetworkState init_state(int n_evidence, int n_clusters, const HyperParams& params, Rng& rng);

/// Coefficient of V_in in the update of u_mn for neurons sharing column n:
/// dti * w(c_im) + gi. The diagonal is gi, or 0 without self coupling.
Matrix column_coupling(const ConflictMatrix& conflicts, const HyperParams& params);

/// Per-column multiplier of (Dti + gi) given the count determination.
Vector domain_drive(const Vector& gd, DomainTerm term);

/// One synchronous update of every neuron. `gd` holds one value per column
/// (count 1..columns); pass zeros to drop the domain term.
NetworkState step(const NetworkState& state, const ConflictMatrix& conflicts,
                  const Vector& gd, const HyperParams& params);

/// Same update with the column coupling precomputed.
NetworkState step_coupled(const NetworkState& state, const Matrix& coupling,
                          const Vector& gd, const HyperParams& params);

/// Shannon entropy of the output voltages, and its ratio to the entropy at
/// initialization clamped to [0, 1].
EntropyReading entropy(const NetworkState& state);
double raw_entropy(const Matrix& v);

/// Every row has exactly one neuron at or above the on threshold and all
/// others at or below the off threshold.
bool is_crisp(const NetworkState& state, const HyperParams& params);

/// Crisp, or out of iterations.
bool has_converged(const NetworkState& state, const HyperParams& params);

/// Row-wise argmax of V; ties go to the lowest column.
Partition extract_partition(const NetworkState& state);

}  // namespace dsclust
