// Acceptance suite: one PASS/FAIL line per criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dsclust/annealer.hpp"
#include "dsclust/count.hpp"
#include "dsclust/error.hpp"
#include "dsclust/harness.hpp"
#include "dsclust/metaconflict.hpp"
#include "dsclust/problem.hpp"
#include "oracles.hpp"

using namespace dsclust;

namespace {

constexpr int kSeeds = 10;
constexpr std::uint64_t kFirstSeed = 1;
int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& measured) {
  std::printf("criterion %d: %s  %s [%s]\n", id, pass ? "PASS" : "FAIL", what.c_str(),
              measured.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void zero_minimum() {
  double worst = 0.0;
  for (std::uint64_t s = kFirstSeed; s < kFirstSeed + kSeeds; ++s) {
    const auto p = generate({5, MassMode::UniformRandom, s});
    const auto r = evaluate_partition(p.evidence, canonical_partition(p.evidence, 5), 0.0);
    worst = std::max(worst, r.mcf);
  }
  report(1, worst <= 1e-12, "canonical partition has zero metaconflict",
         fmt("max Mcf %.3g over %d seeds", worst, kSeeds));
}

void combination_oracle() {
  Rng rng = Rng::stream(2, Stream::Test);
  double worst = 0.0;
  int mismatched = 0;
  for (int t = 0; t < 200; ++t) {
    const int frame = 1 + rng.below(4);
    std::vector<MassFunction> bodies;
    for (int b = 0, n = 1 + rng.below(4); b < n; ++b) {
      bodies.push_back(oracle::random_mass_function(rng, frame, 4));
    }
    const auto expect = oracle::dempster(frame, bodies);
    try {
      const auto got = combine(frame, bodies);
      if (expect.total) {
        ++mismatched;
        continue;
      }
      worst = std::max(worst, std::abs(got.conflict - expect.conflict));
      for (const auto& [set, m] : expect.masses) {
        worst = std::max(worst, std::abs(got.combined.mass(set) - m));
      }
      for (const auto& [set, m] : got.combined.entries()) {
        if (!expect.masses.count(set)) worst = std::max(worst, m);
      }
    } catch (const Error&) {
      if (!expect.total) ++mismatched;
    }
  }
  report(2, worst <= 1e-10 && mismatched == 0, "combine matches exhaustive Dempster",
         fmt("200 cases, max error %.3g, total-conflict mismatches %d", worst, mismatched));
}

void count_oracle() {
  Rng rng = Rng::stream(3, Stream::Test);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(1 + static_cast<std::size_t>(rng.below(10)));
    for (double& x : a) x = rng.unit();
    double theta = 0.0;
    const auto expect = oracle::at_least_by_subsets(a, theta);
    const auto got = at_least_distribution(a);
    worst = std::max(worst, std::abs(got.theta_mass - theta));
    for (std::size_t r = 0; r < a.size(); ++r) {
      worst = std::max(worst, std::abs(got.at_least(static_cast<Eigen::Index>(r)) - expect[r]));
    }
  }
  report(3, worst <= 1e-12, "at-least distribution matches subset enumeration",
         fmt("200 cases, max error %.3g", worst));
}

void end_to_end(const BatchSummary& s, int max_iterations) {
  int ok = 0;
  for (const auto& r : s.unknown_k.runs) {
    if (r.ok && r.crisp && r.iterations < max_iterations && r.final_alpha < 0.01 &&
        r.gd_max > 0.99) {
      ++ok;
    }
  }
  report(4, ok >= 8, "unknown-k runs converge crisply with a settled count",
         fmt("%d/%d runs crisp before the cap with alpha < 0.01 and gd max > 0.99", ok, kSeeds));
}

void histogram(const BatchSummary& s) {
  int near = 0, five = 0;
  std::string hist;
  for (const auto& [count, n] : s.cluster_count_histogram) {
    if (count >= 4 && count <= 6) near += n;
    if (count == 5) five += n;
    hist += fmt("%s%d:%d", hist.empty() ? "" : " ", count, n);
  }
  report(5, near >= 8 && five >= 3, "cluster counts end near five",
         fmt("%d runs in {4,5,6}, %d with exactly 5; histogram %s", near, five, hist.c_str()));
}

void magnitude(const BatchSummary& s) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : s.unknown_k.runs) {
    if (r.ok && r.cluster_count == 5) {
      sum += r.mcf;
      ++n;
    }
  }
  const double mean = n > 0 ? sum / n : 1.0;
  const double per_cluster = mean / 5.0;
  const double per_evidence = mean / s.evidence_count;
  report(6, n > 0 && per_cluster <= 0.05 && per_evidence <= 0.01,
         "five-cluster unknown-k runs have small metaconflict",
         fmt("%d runs, Mcf per cluster %.4f, per evidence %.4f", n, per_cluster, per_evidence));
}

void baseline(const BatchSummary& s) {
  const bool best_ok = s.fixed.failures == 0 && s.fixed.mean_of_4_mcf <= 0.05;
  const bool order_ok = s.fixed.mean_mcf <= s.unknown_k.mean_mcf;
  report(7, best_ok && order_ok, "fixed-k baseline is low and below unknown-k",
         fmt("fixed-k mean of 4 best %.4f, mean Mcf fixed-k %.4f vs unknown-k %.4f",
             s.fixed.mean_of_4_mcf, s.fixed.mean_mcf, s.unknown_k.mean_mcf));
}

void iterations(const BatchSummary& s) {
  auto in_range = [](double x) { return x >= 20.0 && x <= 300.0; };
  report(8, in_range(s.unknown_k.mean_iterations) && in_range(s.fixed.mean_iterations),
         "mean iterations in [20, 300] in both modes",
         fmt("unknown-k %.1f, fixed-k %.1f", s.unknown_k.mean_iterations,
             s.fixed.mean_iterations));
}

void properties() {
  constexpr int kCases = 1000;
  Rng rng = Rng::stream(9, Stream::Test);
  int bad = 0;
  auto argmax = [](const Vector& x) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      if (x(i) > x(best)) best = i;
    }
    return best;
  };
  for (int t = 0; t < kCases; ++t) {
    // Mass function normalization.
    const int frame = 1 + rng.below(6);
    std::vector<MassFunction> bodies;
    for (int b = 0, n = 1 + rng.below(5); b < n; ++b) {
      bodies.push_back(oracle::random_mass_function(rng, frame, 5));
    }
    try {
      if (std::abs(combine(frame, bodies).combined.total() - 1.0) > 1e-9) ++bad;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TotalConflict) ++bad;
    }

    // Conflict matrix symmetry.
    std::vector<SimpleSupport> ev;
    const int rows = 1 + rng.below(8);
    for (int i = 0; i < rows; ++i) {
      ev.emplace_back(FocalSet(1 + rng.next() % 7, 3), rng.open_unit(), i + 1);
    }
    const ConflictMatrix c = conflict_matrix(ev);
    if (c.matrix() != c.matrix().transpose() || !c.matrix().diagonal().isZero(0.0)) ++bad;

    // Posterior and gd normalization, argmax invariance.
    const int columns = 2 + rng.below(7);
    std::vector<double> a(static_cast<std::size_t>(columns));
    for (double& x : a) x = rng.unit();
    try {
      const auto post = posterior_counts(at_least_distribution(a), PriorSpec{0.8, columns});
      const Vector gd = gradual_determination(post.posterior, rng.unit());
      if (std::abs(post.posterior.sum() - 1.0) > 1e-9 || std::abs(gd.sum() - 1.0) > 1e-9 ||
          argmax(gd) != argmax(post.posterior)) {
        ++bad;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TotalConflict) ++bad;
    }

    // Voltage range and determinism by seed.
    HyperParams p;
    p.seed = static_cast<std::uint64_t>(t);
    Rng na = Rng::stream(p.seed, Stream::InitNoise), nb = Rng::stream(p.seed, Stream::InitNoise);
    NetworkState sa = init_state(rows, columns, p, na), sb = init_state(rows, columns, p, nb);
    Vector gd = Vector::Zero(columns);
    gd(rng.below(columns)) = 1.0;
    for (int k = 0; k < 3; ++k) {
      sa = step(sa, c, gd, p);
      sb = step(sb, c, gd, p);
    }
    if (sa.v.minCoeff() < 0.0 || sa.v.maxCoeff() > 1.0 || sa.u != sb.u) ++bad;
  }
  report(9, bad == 0, "randomized invariants hold",
         fmt("%d cases per property, %d violations", kCases, bad));
}

}  // namespace

int main() {
  try {
    zero_minimum();
    combination_oracle();
    count_oracle();

    RunConfig config;  // default problem and parameters
    const auto start = std::chrono::steady_clock::now();
    const BatchSummary s = batch(config, kSeeds, kFirstSeed);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("batch: seeds %llu..%llu, both modes, %.1f s\n",
                static_cast<unsigned long long>(kFirstSeed),
                static_cast<unsigned long long>(kFirstSeed + kSeeds - 1), secs);
    end_to_end(s, config.params.max_iterations);
    histogram(s);
    magnitude(s);
    baseline(s);
    iterations(s);

    properties();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
