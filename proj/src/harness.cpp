#include "dsclust/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dsclust/error.hpp"

namespace dsclust {

namespace {

using nlohmann::json;

void write_row(std::ostream& out, const Eigen::Ref<const Vector>& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) out << ',' << values(i);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

int RunConfig::resolved_columns(int frame_size) const {
  if (mode == Mode::FixedK) return fixed_k;
  return columns > 0 ? columns : frame_size + 1;
}

RunResult run(const RunConfig& config) {
  const Problem problem = generate(config.problem);
  return run(config, problem.evidence);
}

RunResult run(const RunConfig& config, std::span<const SimpleSupport> evidence) {
  const HyperParams& params = config.params;
  params.validate();
  if (evidence.empty()) throw Error(ErrorCode::Domain, "no evidence to cluster");
  const int n = static_cast<int>(evidence.size());
  const int frame_size = evidence.front().focal.frame_size();
  const int columns = config.resolved_columns(frame_size);
  if (config.mode == Mode::FixedK && (config.fixed_k < 1 || config.fixed_k > n)) {
    throw Error(ErrorCode::Domain, "fixed-k mode needs 1 <= k <= evidence count");
  }
  const bool unknown_k = config.mode == Mode::UnknownK;
  const PriorSpec prior{config.prior_p, columns};
  if (unknown_k) prior.validate();

  const ConflictMatrix conflicts = conflict_matrix(evidence);
  const Matrix coupling = column_coupling(conflicts, params);
  Rng rng = Rng::stream(params.seed, Stream::InitNoise);
  NetworkState state = init_state(n, columns, params, rng);

  RunResult result;
  Vector gd = Vector::Zero(columns);
  CountState count;
  EntropyReading reading;
  while (true) {
    reading = entropy(state);
    if (unknown_k) {
      count = compute_count_state(evidence, state, prior, reading.alpha);
      ++result.count_evaluations;
      gd = count.gd;
    }
    if (config.trace.scalars) {
      TraceRow row;
      row.t = state.t;
      row.raw_entropy = reading.raw;
      row.alpha = reading.alpha;
      row.c0 = unknown_k ? count.c0() : 0.0;
      const McfReport so_far = evaluate_partition(evidence, extract_partition(state), row.c0);
      row.mcf = so_far.mcf;
      row.cluster_conflicts = so_far.cluster_conflicts;
      if (unknown_k) {
        row.supports.resize(columns);
        for (int c = 0; c < columns; ++c) {
          row.supports(c) = count.existence[static_cast<std::size_t>(c)].support;
        }
        row.at_least = count.at_least.at_least;
        row.posterior = count.posterior.posterior;
        row.gd = count.gd;
      }
      result.trace.push_back(std::move(row));
    }
    if (config.trace.snapshot_every > 0 && state.t % config.trace.snapshot_every == 0) {
      result.snapshots.push_back({state.t, state.v});
    }
    if (has_converged(state, params)) break;
    state = step_coupled(state, coupling, gd, params);
  }

  result.iterations = state.t;
  result.crisp = is_crisp(state, params);
  result.final_alpha = reading.alpha;
  result.partition = extract_partition(state);
  result.cluster_count = result.partition.nonempty_count();
  const double c0 = unknown_k ? count.c0() : 0.0;
  result.report = evaluate_partition(evidence, result.partition, c0);
  if (unknown_k) {
    result.final_gd = count.gd;
    result.final_posterior = count.posterior.posterior;
  }
  if (config.trace.snapshot_every > 0 &&
      (result.snapshots.empty() || result.snapshots.back().t != state.t)) {
    result.snapshots.push_back({state.t, state.v});
  }
  return result;
}

void emit_trace(const RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  if (!result.trace.empty()) {
    const int columns = result.partition.clusters;
    const bool has_counts = result.trace.front().posterior.size() > 0;
    auto out = open_for_write(dir / "scalars.csv");
    out << "t,entropy,alpha,mcf,c0";
    for (int c = 1; c <= columns; ++c) out << ",conflict_" << c;
    if (has_counts) {
      for (const char* name : {"support_", "at_least_", "posterior_", "gd_"}) {
        for (int c = 1; c <= columns; ++c) out << ',' << name << c;
      }
    }
    out << '\n';
    for (const TraceRow& row : result.trace) {
      out << row.t << ',' << row.raw_entropy << ',' << row.alpha << ',' << row.mcf << ','
          << row.c0;
      write_row(out, to_vector(row.cluster_conflicts));
      if (has_counts) {
        write_row(out, row.supports);
        write_row(out, row.at_least);
        write_row(out, row.posterior);
        write_row(out, row.gd);
      }
      out << '\n';
    }
    if (!out) throw Error(ErrorCode::Io, "failed writing " + (dir / "scalars.csv").string());
  }

  for (const GridSnapshot& snap : result.snapshots) {
    std::ostringstream name;
    name << "grid_" << std::setw(4) << std::setfill('0') << snap.t << ".csv";
    const auto path = dir / name.str();
    auto out = open_for_write(path);
    for (Eigen::Index m = 0; m < snap.v.rows(); ++m) {
      for (Eigen::Index c = 0; c < snap.v.cols(); ++c) {
        if (c > 0) out << ',';
        out << snap.v(m, c);
      }
      out << '\n';
    }
    if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
  }
}

namespace {

RunOutcome outcome_of(const RunConfig& config, std::uint64_t seed) {
  RunConfig cfg = config;
  cfg.problem.seed = seed;
  cfg.params.seed = seed;
  RunOutcome out;
  out.seed = seed;
  try {
    const RunResult r = run(cfg);
    out.ok = true;
    out.iterations = r.iterations;
    out.crisp = r.crisp;
    out.cluster_count = r.cluster_count;
    out.mcf = r.report.mcf;
    out.c0 = r.report.domain_conflict;
    out.final_alpha = r.final_alpha;
    out.gd_max = r.final_gd.size() > 0 ? r.final_gd.maxCoeff() : 0.0;
    if (!cfg.trace_dir.empty()) {
      emit_trace(r, cfg.trace_dir / (std::string(mode_name(cfg.mode)) + "_seed" +
                                     std::to_string(seed)));
    }
  } catch (const Error& e) {
    out.error = std::string(code_name(e.code())) + ": " + e.what();
  }
  return out;
}

std::vector<RunOutcome> run_all(const RunConfig& config, const std::vector<std::uint64_t>& seeds,
                                int threads) {
  std::vector<RunOutcome> outcomes(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      outcomes[i] = outcome_of(config, seeds[i]);
    }
  };
  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), seeds.size());
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  return outcomes;
}

double mean_of(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

void summarize(ModeSummary& s, int evidence_count) {
  std::vector<const RunOutcome*> ok;
  std::vector<double> iterations;
  std::vector<double> all_mcf;
  for (const auto& r : s.runs) {
    if (!r.ok) {
      ++s.failures;
      continue;
    }
    ok.push_back(&r);
    iterations.push_back(r.iterations);
    all_mcf.push_back(r.mcf);
  }
  s.mean_iterations = mean_of(iterations);
  s.mean_mcf = mean_of(all_mcf);
  std::stable_sort(ok.begin(), ok.end(),
                   [](const RunOutcome* a, const RunOutcome* b) { return a->mcf < b->mcf; });
  ok.resize(std::min<std::size_t>(4, ok.size()));
  std::vector<double> mcf, per_cluster;
  for (const RunOutcome* r : ok) {
    s.best_seeds.push_back(r->seed);
    mcf.push_back(r->mcf);
    per_cluster.push_back(r->mcf / std::max(1, r->cluster_count));
  }
  s.best_of_4_mcf = mcf.empty() ? 0.0 : mcf.front();
  s.mean_of_4_mcf = mean_of(mcf);
  s.mcf_per_cluster = mean_of(per_cluster);
  s.mcf_per_evidence = s.mean_of_4_mcf / std::max(1, evidence_count);
}

json mode_json(const ModeSummary& s) {
  json runs = json::array();
  for (const auto& r : s.runs) {
    json j{{"seed", r.seed}, {"ok", r.ok}};
    if (r.ok) {
      j.update({{"iterations", r.iterations},
                {"crisp", r.crisp},
                {"cluster_count", r.cluster_count},
                {"mcf", r.mcf},
                {"c0", r.c0},
                {"final_alpha", r.final_alpha},
                {"gd_max", r.gd_max}});
    } else {
      j["error"] = r.error;
    }
    runs.push_back(std::move(j));
  }
  return runs;
}

}  // namespace

BatchSummary batch(const RunConfig& config, int n_seeds, std::uint64_t first_seed, int threads) {
  if (n_seeds < 1) throw Error(ErrorCode::Domain, "batch needs at least one seed");
  if (threads <= 0) threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  const auto started = std::chrono::steady_clock::now();

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_seeds));
  std::iota(seeds.begin(), seeds.end(), first_seed);

  BatchSummary s;
  s.n_seeds = n_seeds;
  s.first_seed = first_seed;
  s.evidence_count = (1 << config.problem.frame_size) - 1;
  s.fixed_k = config.fixed_k;

  RunConfig unknown = config;
  unknown.mode = Mode::UnknownK;
  RunConfig fixed = config;
  fixed.mode = Mode::FixedK;
  s.unknown_k.runs = run_all(unknown, seeds, threads);
  s.fixed.runs = run_all(fixed, seeds, threads);
  summarize(s.unknown_k, s.evidence_count);
  summarize(s.fixed, s.evidence_count);

  for (const auto& r : s.unknown_k.runs) {
    if (r.ok) ++s.cluster_count_histogram[r.cluster_count];
  }

  std::vector<double> same_mcf, same_per_cluster;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& u = s.unknown_k.runs[i];
    const auto& f = s.fixed.runs[i];
    if (u.ok && f.ok && u.cluster_count == config.fixed_k) {
      s.same_assignments.seeds.push_back(seeds[i]);
      same_mcf.push_back(f.mcf);
      same_per_cluster.push_back(f.mcf / std::max(1, f.cluster_count));
    }
  }
  if (!same_mcf.empty()) {
    s.same_assignments.best_mcf = *std::min_element(same_mcf.begin(), same_mcf.end());
    s.same_assignments.mean_mcf = mean_of(same_mcf);
    s.same_assignments.mcf_per_cluster = mean_of(same_per_cluster);
    s.same_assignments.mcf_per_evidence = s.same_assignments.mean_mcf / s.evidence_count;
  }

  s.degenerate = s.unknown_k.best_seeds.size() < 4 || s.fixed.best_seeds.size() < 4;
  s.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return s;
}

std::string summary_json(const BatchSummary& s) {
  auto per_mode = [&](auto field) {
    return json{{"unknown_k", field(s.unknown_k)}, {"fixed_k", field(s.fixed)}};
  };
  json hist = json::object();
  for (const auto& [count, runs] : s.cluster_count_histogram) hist[std::to_string(count)] = runs;

  json j{
      {"n_seeds", s.n_seeds},
      {"first_seed", s.first_seed},
      {"evidence_count", s.evidence_count},
      {"fixed_k", s.fixed_k},
      {"degenerate", s.degenerate},
      {"mean_iterations", per_mode([](const ModeSummary& m) { return m.mean_iterations; })},
      {"cluster_count_histogram", hist},
      {"best_of_4_mcf", per_mode([](const ModeSummary& m) { return m.best_of_4_mcf; })},
      {"mean_of_4_mcf", per_mode([](const ModeSummary& m) { return m.mean_of_4_mcf; })},
      {"mcf_per_cluster", per_mode([](const ModeSummary& m) { return m.mcf_per_cluster; })},
      {"mcf_per_evidence", per_mode([](const ModeSummary& m) { return m.mcf_per_evidence; })},
      {"mean_mcf", per_mode([](const ModeSummary& m) { return m.mean_mcf; })},
      {"best_4_seeds", per_mode([](const ModeSummary& m) { return m.best_seeds; })},
      {"failures", per_mode([](const ModeSummary& m) { return m.failures; })},
      {"same_assignments",
       {{"seeds", s.same_assignments.seeds},
        {"best_of_4_mcf", s.same_assignments.best_mcf},
        {"mean_of_4_mcf", s.same_assignments.mean_mcf},
        {"mcf_per_cluster", s.same_assignments.mcf_per_cluster},
        {"mcf_per_evidence", s.same_assignments.mcf_per_evidence}}},
      {"runs", per_mode(mode_json)},
  };
  return j.dump(2);
}

std::string summary_table(const BatchSummary& s) {
  std::ostringstream os;
  os << std::fixed;
  os << "seeds " << s.first_seed << ".." << s.first_seed + s.n_seeds - 1 << "  ("
     << s.evidence_count << " pieces of evidence)\n";
  if (s.degenerate) os << "note: fewer than 4 successful runs; statistics are degenerate\n";
  os << "\n                       fixed k=" << s.fixed_k << "    unknown k\n";
  auto line = [&](const char* label, double f, double u, int prec) {
    os << std::left << std::setw(22) << label << std::right << std::setprecision(prec)
       << std::setw(11) << f << std::setw(13) << u << '\n';
  };
  line("mean iterations", s.fixed.mean_iterations, s.unknown_k.mean_iterations, 1);
  line("best of 4 mcf", s.fixed.best_of_4_mcf, s.unknown_k.best_of_4_mcf, 4);
  line("mean of 4 mcf", s.fixed.mean_of_4_mcf, s.unknown_k.mean_of_4_mcf, 4);
  line("mcf / cluster", s.fixed.mcf_per_cluster, s.unknown_k.mcf_per_cluster, 4);
  line("mcf / evidence", s.fixed.mcf_per_evidence, s.unknown_k.mcf_per_evidence, 4);
  line("mean mcf (all runs)", s.fixed.mean_mcf, s.unknown_k.mean_mcf, 4);
  if (s.fixed.failures + s.unknown_k.failures > 0) {
    os << "failed runs: fixed " << s.fixed.failures << ", unknown " << s.unknown_k.failures
       << '\n';
  }
  os << "\nsame assignments (" << s.same_assignments.seeds.size() << " runs): best "
     << std::setprecision(4) << s.same_assignments.best_mcf << ", mean "
     << s.same_assignments.mean_mcf << ", / cluster " << s.same_assignments.mcf_per_cluster
     << ", / evidence " << s.same_assignments.mcf_per_evidence << '\n';
  os << "\ncluster counts (unknown k):";
  for (const auto& [count, runs] : s.cluster_count_histogram) os << "  " << count << ":" << runs;
  os << "\nelapsed " << std::setprecision(2) << s.elapsed_seconds << " s\n";
  return os.str();
}

RunConfig parse_config(std::string_view json_text, RunConfig base) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Parse, "config must be a JSON object");

  static const std::vector<std::string> known = {
      "seed", "mode", "k", "p", "columns", "frame_size", "mass_mode", "trace_dir",
      "snapshot_every", "trace", "params"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::Parse, "config: unknown key '" + key + "'");
    }
  }

  RunConfig c = std::move(base);
  try {
    if (j.contains("seed")) c.problem.seed = c.params.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
    if (j.contains("k")) c.fixed_k = j["k"].get<int>();
    if (j.contains("p")) c.prior_p = j["p"].get<double>();
    if (j.contains("columns")) c.columns = j["columns"].get<int>();
    if (j.contains("frame_size")) c.problem.frame_size = j["frame_size"].get<int>();
    if (j.contains("mass_mode")) c.problem.mass_mode = parse_mass_mode(j["mass_mode"].get<std::string>());
    if (j.contains("trace_dir")) c.trace_dir = j["trace_dir"].get<std::string>();
    if (j.contains("snapshot_every")) c.trace.snapshot_every = j["snapshot_every"].get<int>();
    if (j.contains("trace")) c.trace.scalars = j["trace"].get<bool>();
    if (j.contains("params")) {
      const json& p = j["params"];
      static const std::vector<std::string> param_keys = {
          "eta", "dti", "ri", "Dti", "gi", "eb", "u0", "noise_amplitude", "max_iterations",
          "on_threshold", "off_threshold", "self_coupling", "domain_term"};
      if (!p.is_object()) throw Error(ErrorCode::Parse, "config: params must be an object");
      for (const auto& [key, _] : p.items()) {
        if (std::find(param_keys.begin(), param_keys.end(), key) == param_keys.end()) {
          throw Error(ErrorCode::Parse, "config: unknown params key '" + key + "'");
        }
      }
      HyperParams& h = c.params;
      auto set = [&](const char* key, auto& field) {
        if (p.contains(key)) field = p[key].get<std::decay_t<decltype(field)>>();
      };
      set("eta", h.gain);
      set("dti", h.data_inhibition);
      set("ri", h.row_inhibition);
      set("Dti", h.domain_inhibition);
      set("gi", h.global_inhibition);
      set("eb", h.excitation_bias);
      set("u0", h.sigmoid_scale);
      set("noise_amplitude", h.noise_amplitude);
      set("max_iterations", h.max_iterations);
      set("on_threshold", h.on_threshold);
      set("off_threshold", h.off_threshold);
      set("self_coupling", h.self_coupling);
      if (p.contains("domain_term")) {
        h.domain_term = parse_domain_term(p["domain_term"].get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  return c;
}

std::string_view mode_name(Mode mode) {
  return mode == Mode::FixedK ? "fixed-k" : "unknown-k";
}

Mode parse_mode(std::string_view text) {
  if (text == "unknown-k") return Mode::UnknownK;
  if (text == "fixed-k") return Mode::FixedK;
  throw Error(ErrorCode::Parse, "unknown mode '" + std::string(text) + "'");
}

std::string_view domain_term_name(DomainTerm term) {
  return term == DomainTerm::Literal ? "literal" : "cumulative";
}

DomainTerm parse_domain_term(std::string_view text) {
  if (text == "cumulative") return DomainTerm::Cumulative;
  if (text == "literal") return DomainTerm::Literal;
  throw Error(ErrorCode::Parse, "unknown domain term '" + std::string(text) + "'");
}

}  // namespace dsclust
