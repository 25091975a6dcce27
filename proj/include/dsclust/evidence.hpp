#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dsclust {

using SubsetMask = std::uint64_t;

/// Frame of discernment with at most 63 elements, so that every subset fits
/// in one machine word. Element i (0-based) is bit i of a SubsetMask.
class Frame {
 public:
  static constexpr int kMaxSize = 63;

  explicit Frame(int size);
  explicit Frame(std::vector<std::string> labels);

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  SubsetMask full_mask() const noexcept;

  bool operator==(const Frame& other) const = default;

 private:
  std::vector<std::string> labels_;
};

constexpr SubsetMask full_mask_of(int frame_size) {
  return frame_size >= 64 ? ~SubsetMask{0} : (SubsetMask{1} << frame_size) - 1;
}

/// A subset of a frame. Only the frame size is carried along; it is enough
/// to detect operands drawn from different frames.
class FocalSet {
 public:
  FocalSet(SubsetMask members, int frame_size);

  static FocalSet full(int frame_size);
  /// Builds from 1-based element numbers, as used in problem files.
  static FocalSet from_elements(std::span<const int> elements, int frame_size);

  SubsetMask mask() const noexcept { return members_; }
  int frame_size() const noexcept { return frame_size_; }

  bool empty() const noexcept { return members_ == 0; }
  bool is_full() const noexcept { return members_ == full_mask_of(frame_size_); }
  bool contains(int element) const noexcept { return (members_ >> element) & 1U; }
  int cardinality() const noexcept;
  /// Smallest 0-based element; undefined on the empty set.
  int min_element() const noexcept;
  /// Sorted 1-based element numbers.
  std::vector<int> elements() const;

  FocalSet intersect(const FocalSet& other) const;

  bool operator==(const FocalSet& other) const = default;

 private:
  SubsetMask members_;
  int frame_size_;
};

class MassFunction;

/// One piece of evidence: mass on a single focal set, the rest on the frame.
struct SimpleSupport {
  FocalSet focal;
  double mass;
  int id;

  SimpleSupport(FocalSet focal, double mass, int id = 0);

  double theta_mass() const noexcept { return 1.0 - mass; }
  MassFunction to_mass_function() const;
};

/// Normalized basic probability assignment. Entries are kept sorted by mask,
/// carry strictly positive mass and never include the empty set.
class MassFunction {
 public:
  using Entry = std::pair<SubsetMask, double>;

  MassFunction(int frame_size, std::vector<Entry> entries);

  static MassFunction vacuous(int frame_size);

  int frame_size() const noexcept { return frame_size_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  double mass(SubsetMask focal) const noexcept;
  double mass(const FocalSet& focal) const noexcept { return mass(focal.mask()); }
  double theta_mass() const noexcept { return mass(full_mask_of(frame_size_)); }
  double total() const noexcept;

 private:
  struct Unchecked {};
  MassFunction(int frame_size, std::vector<Entry> entries, Unchecked);
  friend struct CombineResult combine(int, std::span<const MassFunction>);

  int frame_size_;
  std::vector<Entry> entries_;
};

struct CombineResult {
  MassFunction combined;
  double conflict;
};

/// c_jk: the product of the masses when the focal sets are disjoint.
double pairwise_conflict(const SimpleSupport& a, const SimpleSupport& b);

/// Dempster's rule over any number of bodies. The returned conflict is the
/// overall mass on the empty set, composed so that 1 - k = prod(1 - k_step).
/// Throws TotalConflict when the combination is undefined.
CombineResult combine(int frame_size, std::span<const MassFunction> bodies);

/// Evidence weighted by a membership degree v: m(focal) = v * mass.
MassFunction discount_by_voltage(const SimpleSupport& e, double v);

}  // namespace dsclust
