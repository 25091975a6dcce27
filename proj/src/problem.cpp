#include "dsclust/problem.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "dsclust/error.hpp"
#include "dsclust/rng.hpp"

namespace dsclust {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view text, int line) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    parse_error(line, "bad number '" + std::string(text) + "'");
  }
  return value;
}

// Yields (line number, content) for non-blank, non-comment lines.
template <typename F>
void for_each_line(std::istream& in, F&& f) {
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    f(line, text);
  }
}

}  // namespace

Problem generate(const ProblemSpec& spec) {
  if (spec.frame_size < 1 || spec.frame_size > 20) {
    throw Error(ErrorCode::Domain, "generated problems need a frame size in [1, 20]");
  }
  Rng rng = Rng::stream(spec.seed, Stream::Problem);
  Problem p;
  p.frame_size = spec.frame_size;
  const SubsetMask full = full_mask_of(spec.frame_size);
  p.evidence.reserve(static_cast<std::size_t>(full));
  for (SubsetMask mask = 1; mask <= full; ++mask) {
    const double mass = spec.mass_mode == MassMode::AllOnes ? 1.0 : rng.open_unit();
    p.evidence.emplace_back(FocalSet(mask, spec.frame_size), mass, static_cast<int>(mask));
  }
  return p;
}

Partition canonical_partition(std::span<const SimpleSupport> evidence, int frame_size) {
  std::vector<int> assignment;
  assignment.reserve(evidence.size());
  for (const auto& e : evidence) {
    if (e.focal.frame_size() != frame_size) {
      throw Error(ErrorCode::FrameMismatch, "evidence is over a different frame");
    }
    assignment.push_back(e.focal.min_element());
  }
  return Partition(std::move(assignment), frame_size);
}

void write_problem(std::ostream& out, const Problem& problem) {
  out << "frame " << problem.frame_size << '\n';
  out << std::setprecision(17);
  for (const auto& e : problem.evidence) {
    out << e.id << ", ";
    const auto elems = e.focal.elements();
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (i > 0) out << ' ';
      out << elems[i];
    }
    out << ", " << e.mass << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing problem");
}

Problem read_problem(std::istream& in) {
  Problem p;
  for_each_line(in, [&](int line, std::string_view text) {
    if (text.starts_with("frame")) {
      if (p.frame_size != 0) parse_error(line, "duplicate frame line");
      p.frame_size = parse_number<int>(trim(text.substr(5)), line);
      if (p.frame_size < 1 || p.frame_size > Frame::kMaxSize) {
        parse_error(line, "frame size out of range");
      }
      return;
    }
    if (p.frame_size == 0) parse_error(line, "evidence before the frame line");
    const auto fields = split(text, ',');
    if (fields.size() != 3) parse_error(line, "expected 'id, elements, mass'");
    const int id = parse_number<int>(fields[0], line);
    std::vector<int> elems;
    for (auto tok : split(fields[1], ' ')) {
      if (!tok.empty()) elems.push_back(parse_number<int>(tok, line));
    }
    if (!std::is_sorted(elems.begin(), elems.end()) ||
        std::adjacent_find(elems.begin(), elems.end()) != elems.end()) {
      parse_error(line, "elements must be strictly increasing");
    }
    const double mass = parse_number<double>(fields[2], line);
    try {
      p.evidence.emplace_back(FocalSet::from_elements(elems, p.frame_size), mass, id);
    } catch (const Error& e) {
      parse_error(line, e.what());
    }
  });
  if (p.frame_size == 0) throw Error(ErrorCode::Parse, "missing frame line");
  if (p.evidence.empty()) throw Error(ErrorCode::Parse, "problem has no evidence");
  return p;
}

void write_partition(std::ostream& out, std::span<const SimpleSupport> evidence,
                     const Partition& partition) {
  if (partition.assignment.size() != evidence.size()) {
    throw Error(ErrorCode::Domain, "partition size does not match evidence count");
  }
  out << "clusters " << partition.clusters << '\n';
  for (std::size_t m = 0; m < evidence.size(); ++m) {
    out << evidence[m].id << ", " << partition.assignment[m] + 1 << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing partition");
}

Partition read_partition(std::istream& in, std::span<const SimpleSupport> evidence) {
  std::map<int, std::size_t> row_of;
  for (std::size_t m = 0; m < evidence.size(); ++m) row_of[evidence[m].id] = m;

  int clusters = 0;
  std::vector<int> assignment(evidence.size(), -1);
  for_each_line(in, [&](int line, std::string_view text) {
    if (text.starts_with("clusters")) {
      clusters = parse_number<int>(trim(text.substr(8)), line);
      return;
    }
    const auto fields = split(text, ',');
    if (fields.size() != 2) parse_error(line, "expected 'id, cluster'");
    const int id = parse_number<int>(fields[0], line);
    const int cluster = parse_number<int>(fields[1], line);
    const auto it = row_of.find(id);
    if (it == row_of.end()) parse_error(line, "unknown evidence id " + std::to_string(id));
    if (cluster < 1) parse_error(line, "cluster numbers start at 1");
    assignment[it->second] = cluster - 1;
  });
  int highest = 0;
  for (int a : assignment) {
    if (a < 0) throw Error(ErrorCode::Parse, "partition does not cover every piece of evidence");
    highest = std::max(highest, a + 1);
  }
  if (clusters == 0) clusters = highest;
  return Partition(std::move(assignment), clusters);
}

MassMode parse_mass_mode(std::string_view text) {
  if (text == "uniform") return MassMode::UniformRandom;
  if (text == "ones") return MassMode::AllOnes;
  throw Error(ErrorCode::Parse, "unknown mass mode '" + std::string(text) + "'");
}

std::string_view mass_mode_name(MassMode mode) {
  return mode == MassMode::AllOnes ? "ones" : "uniform";
}

}  // namespace dsclust
