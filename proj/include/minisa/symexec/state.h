#pragma once

#include "minisa/symexec/rangeset.h"
#include "minisa/symexec/svals.h"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace minisa::sym {

/// Checker-owned immutable data stored in a state slot.
class SlotData {
public:
  virtual ~SlotData() = default;
  virtual bool empty() const = 0;
  /// Canonical, id-based; equal keys mean equal data.
  virtual std::string key() const = 0;
  virtual std::string dump(const SymbolManager &sm) const = 0;
};
using SlotRef = std::shared_ptr<const SlotData>;

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SlotRegistry {
public:
  /// Throws ConfigError on a duplicate key.
  int registerSlot(const std::string &key);
  const std::string &name(int handle) const { return names_.at(handle); }
  size_t size() const { return names_.size(); }

private:
  std::vector<std::string> names_;
};

struct ReturnInfo {
  SVal value;
  const Node *stmt = nullptr;
};

/// Immutable value; every mutator returns a fresh state.
class ProgramState {
public:
  ProgramState();

  std::optional<SVal> env(int frame, const Node *e) const;
  ProgramState bindEnv(int frame, const Node *e, SVal v) const;
  ProgramState clearEnv(int frame) const;
  const std::map<std::pair<int, int>, SVal> &environment() const;

  std::optional<SVal> lookup(const MemRegion *r) const;
  ProgramState bind(const MemRegion *r, SVal v) const;
  ProgramState unbind(const MemRegion *r) const;
  const std::map<const MemRegion *, SVal, RegionLess> &store() const;

  RangeSet rangeOf(SymbolId s) const; // full when unconstrained
  bool isConstrained(SymbolId s) const;
  ProgramState setConstraint(SymbolId s, const RangeSet &r) const;
  ProgramState removeConstraint(SymbolId s) const;
  const std::map<SymbolId, RangeSet> &constraints() const;

  SlotRef slot(int handle) const;
  ProgramState setSlot(int handle, SlotRef data) const;
  const std::map<int, SlotRef> &slots() const;

  int loopCount(int frame, int block) const;
  ProgramState setLoopCount(int frame, int block, int n) const;
  ProgramState clearFrame(int frame) const; // loop counters and return slot

  std::optional<ReturnInfo> returnValue(int frame) const;
  ProgramState setReturn(int frame, ReturnInfo info) const;
  const std::map<int, ReturnInfo> &returns() const;

  std::string key() const;
  bool operator==(const ProgramState &o) const;
  bool operator!=(const ProgramState &o) const { return !(*this == o); }
  bool sameData(const ProgramState &o) const { return impl_ == o.impl_; }

  /// `b: $b, x: $b+1`; reference variables are shown through their referent.
  std::string dumpStore(const SymbolManager &sm) const;
  /// One `$b : [0, 0]` line per constrained symbol.
  std::string dumpConstraints(const SymbolManager &sm) const;

private:
  struct Impl;
  explicit ProgramState(std::shared_ptr<const Impl> p) : impl_(std::move(p)) {}
  std::shared_ptr<Impl> mut() const;
  std::shared_ptr<const Impl> impl_;
};

std::string svalKey(const SVal &v);

} // namespace minisa::sym
