#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "dsclust/evidence.hpp"
#include "dsclust/metaconflict.hpp"

namespace dsclust {

enum class MassMode {
  UniformRandom,  // open interval (0, 1)
  AllOnes,
};

struct ProblemSpec {
  int frame_size = 5;
  MassMode mass_mode = MassMode::UniformRandom;
  std::uint64_t seed = 0;
};

struct Problem {
  int frame_size = 0;
  std::vector<SimpleSupport> evidence;
};

/// One simple support function per nonempty subset of the frame, in
/// ascending mask order; ids run from 1.
Problem generate(const ProblemSpec& spec);

/// Each piece of evidence goes to the cluster of the smallest element in its
/// focal set. On a generated problem every cluster is conflict free.
Partition canonical_partition(std::span<const SimpleSupport> evidence, int frame_size);

// Line-oriented problem file:
//   # comment
//   frame <size>
//   <id>, <sorted 1-based elements separated by spaces>, <mass>
void write_problem(std::ostream& out, const Problem& problem);
Problem read_problem(std::istream& in);

// Partition file: optional "clusters <R>" line, then "<id>, <cluster>" with
// 1-based cluster numbers, one line per piece of evidence in problem order.
void write_partition(std::ostream& out, std::span<const SimpleSupport> evidence,
                     const Partition& partition);
Partition read_partition(std::istream& in, std::span<const SimpleSupport> evidence);

MassMode parse_mass_mode(std::string_view text);
std::string_view mass_mode_name(MassMode mode);

}  // namespace dsclust
