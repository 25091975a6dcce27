#include "dsclust/evidence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "dsclust/error.hpp"

namespace dsclust {

namespace {

constexpr double kPruneMass = 1e-12;
constexpr double kTotalConflict = 1.0 - 1e-12;
constexpr double kNormTolerance = 1e-9;

void check_frame_size(int size) {
  if (size < 1 || size > Frame::kMaxSize) {
    throw Error(ErrorCode::Domain,
                "frame size must be in [1, 63], got " + std::to_string(size));
  }
}

void require_same_frame(int a, int b) {
  if (a != b) {
    throw Error(ErrorCode::FrameMismatch, "operands are over frames of size " +
                                              std::to_string(a) + " and " +
                                              std::to_string(b));
  }
}

// Sorts products by focal set and sums duplicates, dropping the empty set
// into the returned conflict.
double merge_products(std::vector<MassFunction::Entry>& products) {
  std::sort(products.begin(), products.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double conflict = 0.0;
  std::size_t out = 0;
  for (std::size_t i = 0; i < products.size();) {
    SubsetMask key = products[i].first;
    double sum = 0.0;
    for (; i < products.size() && products[i].first == key; ++i) {
      sum += products[i].second;
    }
    if (key == 0) {
      conflict += sum;
    } else {
      products[out++] = {key, sum};
    }
  }
  products.resize(out);
  return conflict;
}

}  // namespace

Frame::Frame(int size) {
  check_frame_size(size);
  labels_.reserve(static_cast<std::size_t>(size));
  for (int i = 1; i <= size; ++i) labels_.push_back(std::to_string(i));
}

Frame::Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
  check_frame_size(static_cast<int>(labels_.size()));
}

SubsetMask Frame::full_mask() const noexcept { return full_mask_of(size()); }

FocalSet::FocalSet(SubsetMask members, int frame_size)
    : members_(members), frame_size_(frame_size) {
  check_frame_size(frame_size);
  if ((members & ~full_mask_of(frame_size)) != 0) {
    throw Error(ErrorCode::Domain, "focal set has members outside the frame");
  }
}

FocalSet FocalSet::full(int frame_size) {
  return FocalSet(full_mask_of(frame_size), frame_size);
}

FocalSet FocalSet::from_elements(std::span<const int> elements, int frame_size) {
  check_frame_size(frame_size);
  SubsetMask mask = 0;
  for (int e : elements) {
    if (e < 1 || e > frame_size) {
      throw Error(ErrorCode::Domain, "element " + std::to_string(e) +
                                         " outside frame of size " +
                                         std::to_string(frame_size));
    }
    mask |= SubsetMask{1} << (e - 1);
  }
  return FocalSet(mask, frame_size);
}

int FocalSet::cardinality() const noexcept { return std::popcount(members_); }

int FocalSet::min_element() const noexcept { return std::countr_zero(members_); }

std::vector<int> FocalSet::elements() const {
  std::vector<int> out;
  for (int i = 0; i < frame_size_; ++i) {
    if (contains(i)) out.push_back(i + 1);
  }
  return out;
}

FocalSet FocalSet::intersect(const FocalSet& other) const {
  require_same_frame(frame_size_, other.frame_size_);
  return FocalSet(members_ & other.members_, frame_size_);
}

SimpleSupport::SimpleSupport(FocalSet focal_set, double m, int ident)
    : focal(focal_set), mass(m), id(ident) {
  if (focal.empty()) {
    throw Error(ErrorCode::Domain, "simple support function with empty focal set");
  }
  if (!(mass > 0.0 && mass <= 1.0)) {
    std::ostringstream os;
    os << "simple support mass must be in (0, 1], got " << mass;
    throw Error(ErrorCode::Domain, os.str());
  }
}

MassFunction SimpleSupport::to_mass_function() const {
  return discount_by_voltage(*this, 1.0);
}

MassFunction::MassFunction(int frame_size, std::vector<Entry> entries)
    : frame_size_(frame_size), entries_(std::move(entries)) {
  check_frame_size(frame_size);
  const SubsetMask full = full_mask_of(frame_size);
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double sum = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& [mask, m] = entries_[i];
    if (mask == 0) throw Error(ErrorCode::Domain, "mass assigned to the empty set");
    if ((mask & ~full) != 0) {
      throw Error(ErrorCode::Domain, "focal set has members outside the frame");
    }
    if (!(m > 0.0)) throw Error(ErrorCode::Domain, "non-positive mass entry");
    if (i > 0 && entries_[i - 1].first == mask) {
      throw Error(ErrorCode::Domain, "duplicate focal set in mass function");
    }
    sum += m;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    std::ostringstream os;
    os << "masses sum to " << sum << ", expected 1";
    throw Error(ErrorCode::Domain, os.str());
  }
}

MassFunction::MassFunction(int frame_size, std::vector<Entry> entries, Unchecked)
    : frame_size_(frame_size), entries_(std::move(entries)) {}

MassFunction MassFunction::vacuous(int frame_size) {
  return MassFunction(frame_size, {{full_mask_of(frame_size), 1.0}});
}

double MassFunction::mass(SubsetMask focal) const noexcept {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), focal,
      [](const Entry& e, SubsetMask key) { return e.first < key; });
  return it != entries_.end() && it->first == focal ? it->second : 0.0;
}

double MassFunction::total() const noexcept {
  double sum = 0.0;
  for (const auto& e : entries_) sum += e.second;
  return sum;
}

double pairwise_conflict(const SimpleSupport& a, const SimpleSupport& b) {
  require_same_frame(a.focal.frame_size(), b.focal.frame_size());
  return (a.focal.mask() & b.focal.mask()) == 0 ? a.mass * b.mass : 0.0;
}

CombineResult combine(int frame_size, std::span<const MassFunction> bodies) {
  check_frame_size(frame_size);
  std::vector<MassFunction::Entry> acc{{full_mask_of(frame_size), 1.0}};
  std::vector<MassFunction::Entry> products;
  double one_minus_k = 1.0;

  for (const MassFunction& body : bodies) {
    require_same_frame(frame_size, body.frame_size());
    products.clear();
    products.reserve(acc.size() * body.size());
    for (const auto& [a, ma] : acc) {
      for (const auto& [b, mb] : body.entries()) {
        products.emplace_back(a & b, ma * mb);
      }
    }
    const double step_conflict = merge_products(products);
    if (step_conflict >= kTotalConflict) {
      throw Error(ErrorCode::TotalConflict, "totally conflicting evidence");
    }
    one_minus_k *= 1.0 - step_conflict;
    if (one_minus_k <= 1.0 - kTotalConflict) {
      throw Error(ErrorCode::TotalConflict, "totally conflicting evidence");
    }
    const double scale = 1.0 / (1.0 - step_conflict);
    acc.clear();
    for (auto& [mask, m] : products) {
      m *= scale;
      if (m >= kPruneMass) acc.emplace_back(mask, m);
    }
  }

  return {MassFunction(frame_size, std::move(acc), MassFunction::Unchecked{}),
          1.0 - one_minus_k};
}

MassFunction discount_by_voltage(const SimpleSupport& e, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << "voltage must be in [0, 1], got " << v;
    throw Error(ErrorCode::Domain, os.str());
  }
  const int fs = e.focal.frame_size();
  const double support = v * e.mass;
  if (support <= 0.0 || e.focal.is_full()) return MassFunction::vacuous(fs);
  if (support >= 1.0) return MassFunction(fs, {{e.focal.mask(), 1.0}});
  return MassFunction(fs, {{e.focal.mask(), support},
                           {full_mask_of(fs), 1.0 - support}});
}

}  // namespace dsclust
