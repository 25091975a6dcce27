// Command-line front end: run, batch, gen and eval.

#include <fstream>
#include <map>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsclust/error.hpp"
#include "dsclust/harness.hpp"
#include "dsclust/problem.hpp"

namespace {

using namespace dsclust;
using nlohmann::json;

struct Overrides {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string mode;
  int k = 0;
  double p = 0.0;
  int columns = 0;
  int max_iter = 0;
  std::string trace_dir;
  std::string domain_term;
  bool self_coupling = true;
  int frame_size = 0;
  std::string mass_mode;
  int snapshot_every = 0;
  std::map<std::string, CLI::Option*> opts;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void add_config_options(CLI::App* app, Overrides& o) {
  auto add = [&](CLI::Option* opt) { o.opts[opt->get_lnames().front()] = opt; };
  add(app->add_option("--config", o.config_path, "JSON config file; flags override it")
          ->check(CLI::ExistingFile));
  add(app->add_option("--seed", o.seed, "Seed for problem generation and init noise"));
  add(app->add_option("--mode", o.mode, "unknown-k or fixed-k")
          ->check(CLI::IsMember({"unknown-k", "fixed-k"})));
  add(app->add_option("--k", o.k, "Cluster count in fixed-k mode"));
  add(app->add_option("--p", o.p, "Prior constant p of the cluster-count prior"));
  add(app->add_option("--columns", o.columns, "Network columns in unknown-k mode"));
  add(app->add_option("--max-iter", o.max_iter, "Iteration cap"));
  add(app->add_option("--trace-dir", o.trace_dir, "Write per-iteration traces here"));
  add(app->add_option("--domain-term", o.domain_term, "cumulative or literal")
          ->check(CLI::IsMember({"cumulative", "literal"})));
  add(app->add_option("--self-coupling", o.self_coupling, "Keep the gi self term (true/false)"));
  add(app->add_option("--frame-size", o.frame_size, "Frame size of the generated problem"));
  add(app->add_option("--mass-mode", o.mass_mode, "uniform or ones")
          ->check(CLI::IsMember({"uniform", "ones"})));
  add(app->add_option("--snapshot-every", o.snapshot_every,
                      "Voltage grid snapshot period (0 = none)"));
}

bool given(const Overrides& o, const std::string& name) {
  const auto it = o.opts.find(name);
  return it != o.opts.end() && it->second->count() > 0;
}

RunConfig build_config(const Overrides& o) {
  RunConfig c;
  if (!o.config_path.empty()) c = parse_config(slurp(o.config_path), c);
  if (given(o, "seed")) c.problem.seed = c.params.seed = o.seed;
  if (given(o, "mode")) c.mode = parse_mode(o.mode);
  if (given(o, "k")) c.fixed_k = o.k;
  if (given(o, "p")) c.prior_p = o.p;
  if (given(o, "columns")) c.columns = o.columns;
  if (given(o, "max-iter")) c.params.max_iterations = o.max_iter;
  if (given(o, "trace-dir")) c.trace_dir = o.trace_dir;
  if (given(o, "domain-term")) c.params.domain_term = parse_domain_term(o.domain_term);
  if (given(o, "self-coupling")) c.params.self_coupling = o.self_coupling;
  if (given(o, "frame-size")) c.problem.frame_size = o.frame_size;
  if (given(o, "mass-mode")) c.problem.mass_mode = parse_mass_mode(o.mass_mode);
  if (given(o, "snapshot-every")) c.trace.snapshot_every = o.snapshot_every;
  if (!c.trace_dir.empty()) c.trace.scalars = true;
  return c;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_problem(in);
}

json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

int cmd_run(const Overrides& o, const std::string& problem_path, const std::string& partition_out) {
  const RunConfig config = build_config(o);
  const Problem problem =
      problem_path.empty() ? generate(config.problem) : load_problem(problem_path);
  const RunResult r = run(config, problem.evidence);
  if (!config.trace_dir.empty()) emit_trace(r, config.trace_dir);
  if (!partition_out.empty()) {
    std::ofstream out(partition_out);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + partition_out);
    write_partition(out, problem.evidence, r.partition);
  }
  std::vector<int> clusters;
  for (int a : r.partition.assignment) clusters.push_back(a + 1);
  json j{{"mode", mode_name(config.mode)},
         {"iterations", r.iterations},
         {"crisp", r.crisp},
         {"cluster_count", r.cluster_count},
         {"mcf", r.report.mcf},
         {"c0", r.report.domain_conflict},
         {"cluster_conflicts", r.report.cluster_conflicts},
         {"final_alpha", r.final_alpha},
         {"assignment", clusters}};
  if (config.mode == Mode::UnknownK) {
    j["final_gd"] = vec_json(r.final_gd);
    j["final_posterior"] = vec_json(r.final_posterior);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_batch(const Overrides& o, int n_seeds, std::uint64_t first_seed, int threads,
              const std::string& summary_path) {
  const RunConfig config = build_config(o);
  const BatchSummary s = batch(config, n_seeds, first_seed, threads);
  if (!summary_path.empty()) {
    std::ofstream out(summary_path);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + summary_path);
    out << summary_json(s) << '\n';
  }
  std::cout << summary_table(s);
  return 0;
}

int cmd_gen(const Overrides& o, const std::string& out_path) {
  const RunConfig config = build_config(o);
  const Problem p = generate(config.problem);
  if (out_path.empty() || out_path == "-") {
    write_problem(std::cout, p);
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + out_path);
    write_problem(out, p);
  }
  return 0;
}

int cmd_eval(const std::string& problem_path, const std::string& partition_path, double c0) {
  const Problem p = load_problem(problem_path);
  std::ifstream in(partition_path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + partition_path);
  const Partition part = read_partition(in, p.evidence);
  const McfReport r = evaluate_partition(p.evidence, part, c0);
  json j{{"mcf", r.mcf},
         {"c0", r.domain_conflict},
         {"cluster_conflicts", r.cluster_conflicts},
         {"cluster_count", part.nonempty_count()}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

void print_error(std::string_view code, std::string_view message) {
  std::cerr << "error code=" << code << " message=" << json(std::string(message)).dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dempster-Shafer clustering with a neural structure and gradual cluster-count "
               "determination"};
  app.require_subcommand(1);

  Overrides run_o, batch_o, gen_o;
  std::string problem_path, partition_out;
  auto* run_cmd = app.add_subcommand("run", "Cluster one problem");
  add_config_options(run_cmd, run_o);
  run_cmd->add_option("--problem", problem_path, "Problem file (default: generate)")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--partition-out", partition_out, "Write the final partition here");

  int n_seeds = 10;
  std::uint64_t first_seed = 1;
  int threads = 0;
  std::string summary_path;
  auto* batch_cmd = app.add_subcommand("batch", "Seeded runs in both modes with summary");
  add_config_options(batch_cmd, batch_o);
  batch_cmd->add_option("--seeds", n_seeds, "Number of seeds")->check(CLI::PositiveNumber);
  batch_cmd->add_option("--first-seed", first_seed, "First seed of the range");
  batch_cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");
  batch_cmd->add_option("--summary", summary_path, "Write the JSON summary here");

  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Emit a generated problem file");
  add_config_options(gen_cmd, gen_o);
  gen_cmd->add_option("--out", gen_out, "Output path (default: stdout)");

  std::string eval_problem, eval_partition;
  double eval_c0 = 0.0;
  auto* eval_cmd = app.add_subcommand("eval", "Score a partition file");
  eval_cmd->add_option("--problem", eval_problem, "Problem file")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--partition", eval_partition, "Partition file")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--c0", eval_c0, "Domain conflict")->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
  }

  try {
    if (*run_cmd) return cmd_run(run_o, problem_path, partition_out);
    if (*batch_cmd) return cmd_batch(batch_o, n_seeds, first_seed, threads, summary_path);
    if (*gen_cmd) return cmd_gen(gen_o, gen_out);
    if (*eval_cmd) return cmd_eval(eval_problem, eval_partition, eval_c0);
  } catch (const Error& e) {
    print_error(code_name(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
