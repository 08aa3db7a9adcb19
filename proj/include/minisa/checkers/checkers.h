#pragma once

#include "minisa/symexec/engine.h"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace minisa::checkers {

using sym::MemRegion;
using sym::ProgramState;
using sym::SymbolId;

struct CheckerDescriptor {
  std::string name; // package.Name
  std::string help;
  std::vector<std::string> deps;
};

/// Alphabetical by full name.
const std::vector<CheckerDescriptor> &builtinCheckers();

/// `--analyzer-checker-help` text for `list`.
std::string checkerHelp(const std::vector<CheckerDescriptor> &list);

struct CheckerSelection {
  std::set<std::string> requested; // named on the command line (or all)
  std::set<std::string> enabled;   // requested plus dependency closure
};

/// `spec` is a comma list of checker names or package prefixes; empty means
/// everything. Throws sym::ConfigError on a name matching nothing.
CheckerSelection selectCheckers(const std::string &spec);

/// Adds the selected checkers to `eng` in registry order.
void registerCheckers(sym::Engine &eng, const CheckerSelection &sel);

// ---- shared allocation state ----

struct RefState {
  enum class Status { Allocated, Released };
  enum class Family { Heap, InnerBuffer };
  Status status = Status::Allocated;
  Family family = Family::Heap;
  const Node *origin = nullptr; // releasing expression; none for destructors

  bool isReleased() const { return status == Status::Released; }
  bool operator==(const RefState &) const = default;
};

class RegionStateMap : public sym::SlotData {
public:
  std::map<SymbolId, RefState> entries;
  bool empty() const override { return entries.empty(); }
  std::string key() const override;
  std::string dump(const sym::SymbolManager &sm) const override;
};

class RawPtrMap : public sym::SlotData {
public:
  std::map<const MemRegion *, std::set<SymbolId>, sym::RegionLess> entries;
  bool empty() const override { return entries.empty(); }
  std::string key() const override;
  std::string dump(const sym::SymbolManager &sm) const override;
};

/// Slot handles shared by the memory checkers and their visitors.
struct MemorySlots {
  int region_state = -1;
  int raw_ptr = -1;
};

namespace allocation_state {

const RefState *getRefState(const ProgramState &st, const MemorySlots &h, SymbolId s);
/// Released(InnerBuffer, origin). Returns a new state; creates no node.
ProgramState markReleased(const ProgramState &st, const MemorySlots &h, SymbolId s,
                          const Node *origin);
/// The string region whose pointer set holds `s`, if any.
const MemRegion *getContainerObjRegion(const ProgramState &st, const MemorySlots &h, SymbolId s);

} // namespace allocation_state

/// Name of the call an InnerBuffer release came from: method, operator or
/// function name; "unknown" otherwise.
std::string releaseCallName(const Node *origin);

class MallocBugVisitor : public sym::BugVisitor {
public:
  MallocBugVisitor(MemorySlots h, SymbolId s) : h_(h), sym_(s) {}
  std::optional<sym::PathPiece> visitNode(const sym::ExplodedNode *n, const sym::ExplodedNode *pred,
                                          const sym::BugReport &r) override;

private:
  MemorySlots h_;
  SymbolId sym_;
};

class InnerPointerBRVisitor : public sym::BugVisitor {
public:
  InnerPointerBRVisitor(MemorySlots h, SymbolId s) : h_(h), sym_(s) {}
  std::optional<sym::PathPiece> visitNode(const sym::ExplodedNode *n, const sym::ExplodedNode *pred,
                                          const sym::BugReport &r) override;

private:
  MemorySlots h_;
  SymbolId sym_;
};

class MallocLiteChecker : public sym::Checker {
public:
  MallocLiteChecker(std::shared_ptr<MemorySlots> h, bool report_heap)
      : h_(std::move(h)), report_heap_(report_heap) {}
  std::string name() const override { return "unix.MallocLite"; }
  void registerSlots(sym::SlotRegistry &reg) override;
  void checkPreStmt(const Node *s, sym::CheckerContext &ctx) override;
  void checkPostStmt(const Node *s, sym::CheckerContext &ctx) override;
  void checkPreCall(const sym::CallEvent &call, sym::CheckerContext &ctx) override;
  void checkDeadSymbols(const sym::SymbolReaper &rp, sym::CheckerContext &ctx) override;
  void checkEndFunction(const sym::ReturnInfo *ret, sym::CheckerContext &ctx) override;

private:
  /// True when a report was emitted and the path ended.
  bool checkUse(const sym::SVal &v, const Node *site, sym::CheckerContext &ctx);
  void reportSimple(const std::string &msg, const Node *site, sym::CheckerContext &ctx);

  std::shared_ptr<MemorySlots> h_;
  bool report_heap_;
};

class InnerPointerChecker : public sym::Checker {
public:
  explicit InnerPointerChecker(std::shared_ptr<MemorySlots> h) : h_(std::move(h)) {}
  std::string name() const override { return "cplusplus.InnerPointer"; }
  void registerSlots(sym::SlotRegistry &reg) override;
  void checkPostCall(const sym::CallEvent &call, sym::CheckerContext &ctx) override;
  void checkPostImplicitDtor(const Node *var, const MemRegion *r,
                             sym::CheckerContext &ctx) override;
  void checkDeadSymbols(const sym::SymbolReaper &rp, sym::CheckerContext &ctx) override;

  static bool isInvalidatingMemberFunction(const sym::CallEvent &call);

private:
  ProgramState markPtrSymbolsReleased(ProgramState st, const MemRegion *r,
                                      const Node *origin) const;
  ProgramState checkFunctionArguments(ProgramState st, const sym::CallEvent &call) const;

  std::shared_ptr<MemorySlots> h_;
};

class DivZeroChecker : public sym::Checker {
public:
  std::string name() const override { return "core.DivideZero"; }
  void checkPreStmt(const Node *s, sym::CheckerContext &ctx) override;
};

} // namespace minisa::checkers
