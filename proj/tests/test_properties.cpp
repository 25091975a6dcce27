// Randomized invariants, 1000 cases each, from fixed seeds.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dsclust/annealer.hpp"
#include "dsclust/count.hpp"
#include "dsclust/error.hpp"
#include "dsclust/metaconflict.hpp"
#include "dsclust/problem.hpp"
#include "oracles.hpp"

using namespace dsclust;

namespace {

constexpr int kCases = 1000;

std::vector<SimpleSupport> random_evidence(Rng& rng, int n, int frame) {
  std::vector<SimpleSupport> ev;
  const auto full = full_mask_of(frame);
  for (int i = 0; i < n; ++i) {
    const double mass = rng.below(10) == 0 ? 1.0 : rng.open_unit();
    ev.emplace_back(FocalSet(1 + rng.next() % full, frame), mass, i + 1);
  }
  return ev;
}

Eigen::Index argmax(const Vector& x) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    if (x(i) > x(best)) best = i;
  }
  return best;
}

}  // namespace

TEST_CASE("combined mass functions stay normalized") {
  Rng rng = Rng::stream(101, Stream::Test);
  for (int t = 0; t < kCases; ++t) {
    const int frame = 1 + rng.below(6);
    std::vector<MassFunction> bodies;
    for (int b = 0, n = 1 + rng.below(5); b < n; ++b) {
      bodies.push_back(oracle::random_mass_function(rng, frame, 5));
    }
    try {
      const auto r = combine(frame, bodies);
      CHECK(std::abs(r.combined.total() - 1.0) <= 1e-9);
      CHECK(r.conflict >= 0.0);
      CHECK(r.conflict < 1.0);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TotalConflict);
    }
  }
}

TEST_CASE("combination does not depend on order") {
  Rng rng = Rng::stream(102, Stream::Test);
  for (int t = 0; t < kCases; ++t) {
    const int frame = 1 + rng.below(6);
    std::vector<MassFunction> bodies;
    for (int b = 0, n = 2 + rng.below(4); b < n; ++b) {
      bodies.push_back(oracle::random_mass_function(rng, frame, 4));
    }
    auto shuffled = bodies;
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      std::swap(shuffled[i], shuffled[static_cast<std::size_t>(rng.below(static_cast<int>(i) + 1))]);
    }
    bool total_a = false, total_b = false;
    CombineResult a{MassFunction::vacuous(frame), 0.0}, b = a;
    try { a = combine(frame, bodies); } catch (const Error&) { total_a = true; }
    try { b = combine(frame, shuffled); } catch (const Error&) { total_b = true; }
    REQUIRE(total_a == total_b);
    if (total_a) continue;
    CHECK(std::abs(a.conflict - b.conflict) <= 1e-9);
    for (const auto& [set, m] : a.combined.entries()) {
      CHECK(std::abs(b.combined.mass(set) - m) <= 1e-9);
    }
  }
}

TEST_CASE("theta mass of combined simple supports has a closed form") {
  Rng rng = Rng::stream(103, Stream::Test);
  for (int t = 0; t < kCases; ++t) {
    const int frame = 1 + rng.below(8);
    const auto ev = random_evidence(rng, 1 + rng.below(12), frame);
    std::vector<MassFunction> bodies;
    double product = 1.0;
    for (const auto& e : ev) {
      bodies.push_back(e.to_mass_function());
      if (!e.focal.is_full()) product *= 1.0 - e.mass;
    }
    try {
      const auto r = combine(frame, bodies);
      CHECK(std::abs(r.combined.theta_mass() - product / (1.0 - r.conflict)) <= 1e-9);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TotalConflict);
    }
  }
}

TEST_CASE("conflict matrices are symmetric with a zero diagonal") {
  Rng rng = Rng::stream(104, Stream::Test);
  for (int t = 0; t < kCases; ++t) {
    const auto ev = random_evidence(rng, 1 + rng.below(10), 1 + rng.below(6));
    const Matrix c = conflict_matrix(ev).matrix();
    CHECK(c == c.transpose());
    CHECK(c.diagonal().isZero(0.0));
    CHECK(c.minCoeff() >= 0.0);
    CHECK(c.maxCoeff() <= 1.0);
  }
}

TEST_CASE("posterior and gd are normalized and gd keeps the argmax") {
  Rng rng = Rng::stream(105, Stream::Test);
  for (int t = 0; t < kCases; ++t) {
    const int columns = 2 + rng.below(7);
    std::vector<double> a(static_cast<std::size_t>(columns));
    for (double& x : a) x = rng.below(8) == 0 ? 1.0 : rng.unit();
    const PriorSpec prior{0.05 + 0.9 * rng.unit(), columns};
    const auto ev = at_least_distribution(a);
    CHECK(std::abs(ev.at_least.sum() + ev.theta_mass - 1.0) <= 1e-12);
    CountPosterior post;
    try {
      post = posterior_counts(ev, prior);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TotalConflict);
      continue;
    }
    CHECK(std::abs(post.posterior.sum() - 1.0) <= 1e-9);
    CHECK(post.posterior.minCoeff() >= 0.0);
    const double alpha = rng.unit();
    const Vector gd = gradual_determination(post.posterior, alpha);
    CHECK(std::abs(gd.sum() - 1.0) <= 1e-9);
    CHECK(gd.minCoeff() >= 0.0);
    CHECK(gd.maxCoeff() <= 1.0 + 1e-12);
    CHECK(argmax(gd) == argmax(post.posterior));
  }
}

TEST_CASE("voltages stay in the unit interval") {
  Rng rng = Rng::stream(106, Stream::Test);
  HyperParams p;
  for (int t = 0; t < kCases; ++t) {
    const int rows = 1 + rng.below(8), cols = 2 + rng.below(5);
    const auto ev = random_evidence(rng, rows, 3);
    const ConflictMatrix c = conflict_matrix(ev);
    p.gain = 1e-5 * (1.0 + 100.0 * rng.unit());
    p.domain_term = rng.below(2) ? DomainTerm::Literal : DomainTerm::Cumulative;
    Rng noise = Rng::stream(static_cast<std::uint64_t>(t), Stream::InitNoise);
    NetworkState s = init_state(rows, cols, p, noise);
    Vector gd = Vector::Zero(cols);
    gd(rng.below(cols)) = 1.0;
    for (int k = 0; k < 5; ++k) s = step(s, c, gd, p);
    CHECK(s.v.minCoeff() >= 0.0);
    CHECK(s.v.maxCoeff() <= 1.0);
    const auto r = entropy(s);
    CHECK(r.alpha >= 0.0);
    CHECK(r.alpha <= 1.0);
  }
}

TEST_CASE("generation and initialization are determined by the seed") {
  for (int t = 0; t < kCases; ++t) {
    const auto seed = static_cast<std::uint64_t>(t) * 7919U;
    const auto a = generate({4, MassMode::UniformRandom, seed});
    const auto b = generate({4, MassMode::UniformRandom, seed});
    for (std::size_t i = 0; i < a.evidence.size(); ++i) {
      REQUIRE(a.evidence[i].mass == b.evidence[i].mass);
    }
    Rng ra = Rng::stream(seed, Stream::InitNoise), rb = Rng::stream(seed, Stream::InitNoise);
    HyperParams p;
    CHECK(init_state(3, 3, p, ra).u == init_state(3, 3, p, rb).u);
  }
}

TEST_CASE("metaconflict lies in the unit interval and dominates its parts") {
  Rng rng = Rng::stream(107, Stream::Test);
  for (int t = 0; t < kCases; ++t) {
    const int frame = 1 + rng.below(5);
    const int n = 1 + rng.below(10);
    const auto ev = random_evidence(rng, n, frame);
    const int k = 1 + rng.below(4);
    std::vector<int> a(static_cast<std::size_t>(n));
    for (int& x : a) x = rng.below(k);
    const double c0 = rng.unit();
    const auto r = evaluate_partition(ev, Partition(a, k), c0);
    CHECK(r.mcf >= 0.0);
    CHECK(r.mcf <= 1.0);
    CHECK(r.mcf >= c0 - 1e-15);
    for (double c : r.cluster_conflicts) CHECK(r.mcf >= c - 1e-15);
  }
}
