#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsclust/annealer.hpp"
#include "dsclust/count.hpp"
#include "dsclust/metaconflict.hpp"
#include "dsclust/problem.hpp"

namespace dsclust {

enum class Mode {
  UnknownK,  // count determination fed back through the domain term
  FixedK,    // baseline network with a fixed number of columns and no domain term
};

struct TraceOptions {
  bool scalars = false;
  /// Keep the voltage grid every this many iterations; 0 disables.
  int snapshot_every = 0;
};

struct RunConfig {
  ProblemSpec problem;
  HyperParams params;
  double prior_p = 0.8;
  Mode mode = Mode::UnknownK;
  int fixed_k = 5;
  /// Network columns in unknown-k mode; 0 means frame size + 1.
  int columns = 0;
  TraceOptions trace;
  std::filesystem::path trace_dir;

  int resolved_columns(int frame_size) const;
};

struct TraceRow {
  int t = 0;
  double raw_entropy = 0.0;
  double alpha = 0.0;
  double mcf = 0.0;
  double c0 = 0.0;
  std::vector<double> cluster_conflicts;
  // Empty in fixed-k mode.
  Vector supports;
  Vector at_least;
  Vector posterior;
  Vector gd;
};

struct GridSnapshot {
  int t = 0;
  Matrix v;
};

struct RunResult {
  Partition partition;
  McfReport report;
  int iterations = 0;
  bool crisp = false;
  int cluster_count = 0;
  double final_alpha = 1.0;
  // Empty in fixed-k mode.
  Vector final_gd;
  Vector final_posterior;
  std::vector<TraceRow> trace;
  std::vector<GridSnapshot> snapshots;
  /// Number of count-determination passes; stays 0 in fixed-k mode.
  int count_evaluations = 0;
};

/// Generates the configured problem and clusters it.
RunResult run(const RunConfig& config);
RunResult run(const RunConfig& config, std::span<const SimpleSupport> evidence);

/// Writes scalars.csv and one grid_<t>.csv per snapshot into `dir`.
void emit_trace(const RunResult& result, const std::filesystem::path& dir);

struct RunOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  int iterations = 0;
  bool crisp = false;
  int cluster_count = 0;
  double mcf = 0.0;
  double c0 = 0.0;
  double final_alpha = 0.0;
  double gd_max = 0.0;
};

struct ModeSummary {
  std::vector<RunOutcome> runs;
  double mean_iterations = 0.0;
  /// Statistics over the four lowest-Mcf successful runs.
  std::vector<std::uint64_t> best_seeds;
  double best_of_4_mcf = 0.0;
  double mean_of_4_mcf = 0.0;
  double mcf_per_cluster = 0.0;
  double mcf_per_evidence = 0.0;
  double mean_mcf = 0.0;
  int failures = 0;
};

/// Fixed-k runs on the problems where unknown-k settled on fixed_k clusters.
struct SameAssignments {
  std::vector<std::uint64_t> seeds;
  double best_mcf = 0.0;
  double mean_mcf = 0.0;
  double mcf_per_cluster = 0.0;
  double mcf_per_evidence = 0.0;
};

struct BatchSummary {
  int n_seeds = 0;
  std::uint64_t first_seed = 0;
  int evidence_count = 0;
  int fixed_k = 0;
  ModeSummary unknown_k;
  ModeSummary fixed;
  std::map<int, int> cluster_count_histogram;
  SameAssignments same_assignments;
  /// Fewer than four successful runs in some mode.
  bool degenerate = false;
  double elapsed_seconds = 0.0;
};

/// Runs seeds first_seed .. first_seed + n_seeds - 1 in both modes. Per-run
/// failures are recorded, not thrown. `threads` = 0 uses the hardware count.
BatchSummary batch(const RunConfig& config, int n_seeds, std::uint64_t first_seed = 1,
                   int threads = 0);

/// Structured summary; deterministic for a given config and seed range.
std::string summary_json(const BatchSummary& summary);
std::string summary_table(const BatchSummary& summary);

/// Overlays the keys present in a JSON config document onto `base`.
RunConfig parse_config(std::string_view json_text, RunConfig base = {});

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view text);
std::string_view domain_term_name(DomainTerm term);
DomainTerm parse_domain_term(std::string_view text);

}  // namespace dsclust
