#include "minisa/symexec/rangeset.h"

#include <algorithm>
#include <stdexcept>

namespace minisa::sym {

namespace {

int64_t wrapAdd(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) + static_cast<uint64_t>(b));
}

std::string bound(int64_t v) {
  if (v == kIMin)
    return "IMIN";
  if (v == kIMax)
    return "IMAX";
  return std::to_string(v);
}

} // namespace

RangeSet RangeSet::interval(int64_t lo, int64_t hi) {
  RangeSet r;
  if (lo <= hi)
    r.iv_.push_back({lo, hi});
  return r;
}

RangeSet RangeSet::of(std::vector<Interval> in) {
  in.erase(std::remove_if(in.begin(), in.end(),
                          [](const Interval &i) { return i.first > i.second; }),
           in.end());
  std::sort(in.begin(), in.end());
  RangeSet r;
  for (const Interval &i : in) {
    if (!r.iv_.empty()) {
      Interval &last = r.iv_.back();
      if (last.second == kIMax || i.first <= last.second + 1) {
        last.second = std::max(last.second, i.second);
        continue;
      }
    }
    r.iv_.push_back(i);
  }
  return r;
}

RangeSet RangeSet::satisfying(const std::string &op, int64_t k) {
  if (op == "==")
    return point(k);
  if (op == "!=")
    return point(k).complement();
  if (op == "<")
    return k == kIMin ? RangeSet() : interval(kIMin, k - 1);
  if (op == "<=")
    return interval(kIMin, k);
  if (op == ">")
    return k == kIMax ? RangeSet() : interval(k + 1, kIMax);
  if (op == ">=")
    return interval(k, kIMax);
  throw std::invalid_argument("not a comparison operator: " + op);
}

bool RangeSet::isFull() const {
  return iv_.size() == 1 && iv_[0].first == kIMin && iv_[0].second == kIMax;
}

bool RangeSet::contains(int64_t v) const {
  for (const Interval &i : iv_)
    if (i.first <= v && v <= i.second)
      return true;
  return false;
}

std::optional<int64_t> RangeSet::singleton() const {
  if (iv_.size() == 1 && iv_[0].first == iv_[0].second)
    return iv_[0].first;
  return std::nullopt;
}

std::optional<int64_t> RangeSet::smallestMagnitude() const {
  std::optional<int64_t> best;
  auto better = [&](int64_t v) {
    if (!best)
      return true;
    uint64_t a = v < 0 ? 0 - static_cast<uint64_t>(v) : static_cast<uint64_t>(v);
    uint64_t b = *best < 0 ? 0 - static_cast<uint64_t>(*best) : static_cast<uint64_t>(*best);
    return a < b;
  };
  for (const Interval &i : iv_) {
    int64_t c = i.first > 0 ? i.first : (i.second < 0 ? i.second : 0);
    if (better(c))
      best = c;
  }
  return best;
}

RangeSet RangeSet::intersect(const RangeSet &o) const {
  std::vector<Interval> out;
  size_t a = 0, b = 0;
  while (a < iv_.size() && b < o.iv_.size()) {
    int64_t lo = std::max(iv_[a].first, o.iv_[b].first);
    int64_t hi = std::min(iv_[a].second, o.iv_[b].second);
    if (lo <= hi)
      out.push_back({lo, hi});
    if (iv_[a].second < o.iv_[b].second)
      ++a;
    else
      ++b;
  }
  RangeSet r;
  r.iv_ = std::move(out);
  return r;
}

RangeSet RangeSet::unite(const RangeSet &o) const {
  std::vector<Interval> all = iv_;
  all.insert(all.end(), o.iv_.begin(), o.iv_.end());
  return of(std::move(all));
}

RangeSet RangeSet::complement() const {
  std::vector<Interval> out;
  int64_t next = kIMin;
  bool open = true; // `next` still inside the domain
  for (const Interval &i : iv_) {
    if (open && i.first > next)
      out.push_back({next, i.first - 1});
    if (i.second == kIMax) {
      open = false;
      break;
    }
    next = i.second + 1;
  }
  if (open && (iv_.empty() || iv_.back().second != kIMax))
    out.push_back({next, kIMax});
  RangeSet r;
  r.iv_ = std::move(out);
  return r;
}

RangeSet RangeSet::shift(int64_t c) const {
  if (isFull() || c == 0)
    return *this;
  std::vector<Interval> out;
  for (const Interval &i : iv_) {
    uint64_t len = static_cast<uint64_t>(i.second) - static_cast<uint64_t>(i.first);
    int64_t lo = wrapAdd(i.first, c);
    int64_t hi = wrapAdd(lo, static_cast<int64_t>(len));
    if (lo <= hi) {
      out.push_back({lo, hi});
    } else {
      out.push_back({lo, kIMax});
      out.push_back({kIMin, hi});
    }
  }
  return of(std::move(out));
}

std::string RangeSet::toString() const {
  if (iv_.empty())
    return "{}";
  std::string s;
  for (size_t i = 0; i < iv_.size(); ++i) {
    if (i)
      s += " \xE2\x88\xAA "; // ∪
    s += "[" + bound(iv_[i].first) + ", " + bound(iv_[i].second) + "]";
  }
  return s;
}

} // namespace minisa::sym
