#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace minisa::sym {

inline constexpr int64_t kIMin = std::numeric_limits<int64_t>::min();
inline constexpr int64_t kIMax = std::numeric_limits<int64_t>::max();

/// A normalized union of closed intervals over int64.
class RangeSet {
public:
  using Interval = std::pair<int64_t, int64_t>;

  RangeSet() = default; // empty
  static RangeSet full() { return interval(kIMin, kIMax); }
  static RangeSet point(int64_t v) { return interval(v, v); }
  static RangeSet interval(int64_t lo, int64_t hi);
  static RangeSet of(std::vector<Interval> intervals);
  /// `{ v | v <op> k }` for op in == != < <= > >=.
  static RangeSet satisfying(const std::string &op, int64_t k);

  bool empty() const { return iv_.empty(); }
  bool isFull() const;
  bool contains(int64_t v) const;
  std::optional<int64_t> singleton() const;
  /// The element closest to zero; used to pick concrete witnesses.
  std::optional<int64_t> smallestMagnitude() const;

  RangeSet intersect(const RangeSet &o) const;
  RangeSet unite(const RangeSet &o) const;
  RangeSet complement() const;
  /// Adds `c` to every element with two's-complement wraparound.
  RangeSet shift(int64_t c) const;

  const std::vector<Interval> &intervals() const { return iv_; }
  bool operator==(const RangeSet &o) const { return iv_ == o.iv_; }
  bool operator!=(const RangeSet &o) const { return iv_ != o.iv_; }

  /// `[IMIN, -1] ∪ [1, IMAX]`
  std::string toString() const;

private:
  std::vector<Interval> iv_;
};

} // namespace minisa::sym
