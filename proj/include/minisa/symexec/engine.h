#pragma once

#include "minisa/cfg/cfg.h"
#include "minisa/frontend/builtins.h"
#include "minisa/frontend/frontend.h"
#include "minisa/symexec/state.h"

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace minisa::sym {

struct AnalysisOptions {
  int unroll = 4;
  int node_budget = 50000;
  int inline_depth = 5;
};

/// One stack frame. Interned per (parent, call site).
struct LocationContext {
  int id = 0;
  const LocationContext *parent = nullptr;
  const Node *fn = nullptr;
  const cfg::Cfg *cfg = nullptr;
  const Node *call_site = nullptr;
  int call_block = -1;
  int call_elem = -1;
  int depth = 0;
};

struct ProgramPoint {
  enum class Kind { PreStmt, PostStmt, BlockEdge, CallEnter, CallExit, PostImplicitCall };
  Kind kind = Kind::PostStmt;
  const Node *stmt = nullptr;
  int from = -1, to = -1;     // BlockEdge
  const Node *var = nullptr;  // PostImplicitCall
  SourceLocation loc;         // PostImplicitCall trigger
  const LocationContext *frame = nullptr;
  std::string tag;            // checker that produced the node, if any

  const char *kindName() const;
  std::string str() const;
  /// Where a diagnostic anchored at this point should be reported.
  SourceLocation location() const;
  std::string key() const;
};

struct ExplodedNode {
  int id = 0;
  ProgramPoint point;
  ProgramState state;
  std::vector<ExplodedNode *> preds;
  std::vector<ExplodedNode *> succs;
  bool sink = false;
  /// Continuation: next element `elem` of `block` in point.frame's CFG.
  int block = -1;
  int elem = 0;

  const ExplodedNode *firstPred() const { return preds.empty() ? nullptr : preds[0]; }
};

class ExplodedGraph {
public:
  explicit ExplodedGraph(const Node *fn, int budget) : fn_(fn), budget_(budget) {}

  /// Returns {node, is_new}. Exact (point, state, continuation) duplicates
  /// are merged. Returns {nullptr, false} once the node budget is spent.
  std::pair<ExplodedNode *, bool> getNode(const ProgramPoint &pp, const ProgramState &st,
                                          ExplodedNode *pred, int block, int elem,
                                          bool sink = false);

  const Node *function() const { return fn_; }
  const std::deque<ExplodedNode> &nodes() const { return nodes_; }
  const std::vector<ExplodedNode *> &roots() const { return roots_; }
  size_t size() const { return nodes_.size(); }
  bool contains(const ExplodedNode *n) const;
  bool budgetExhausted() const { return exhausted_; }
  /// Non-sink nodes without successors.
  std::vector<const ExplodedNode *> leaves() const;

  SymbolManager symbols;
  RegionManager regions;
  std::deque<LocationContext> frames;
  std::map<std::pair<int, int>, LocationContext *> frame_index;

private:
  const Node *fn_;
  int budget_;
  bool exhausted_ = false;
  std::deque<ExplodedNode> nodes_;
  std::vector<ExplodedNode *> roots_;
  std::unordered_map<std::string, ExplodedNode *> index_;
};

struct CallEvent {
  enum class Kind { Function, Method, Operator, Destructor };
  Kind kind = Kind::Function;
  const Node *expr = nullptr;   // Call, MethodCall or string Assign
  const Node *callee = nullptr; // FunctionDecl / ExternDecl
  const StringMethod *method = nullptr;
  std::string name;             // callee, method, `operator=`, `operator+=`
  const MemRegion *receiver = nullptr;
  std::vector<const Node *> arg_exprs;
  std::vector<SVal> args;
  std::vector<const MemRegion *> arg_regions; // lvalue of each argument, if any
  std::vector<TypeRef> param_types;
  SVal ret = SVal::unknown();
  /// Body unavailable: extern functions and string methods.
  bool isLibraryCall() const;
};

struct PathPiece {
  enum class Kind { Event, FinalWarning };
  SourceLocation loc;
  std::string message;
  Kind kind = Kind::Event;
};

struct BugReport;

class BugVisitor {
public:
  virtual ~BugVisitor() = default;
  virtual std::optional<PathPiece> visitNode(const ExplodedNode *n, const ExplodedNode *pred,
                                             const BugReport &r) = 0;
};

struct BugReport {
  std::string checker;
  std::string bug_type;
  std::string category;
  std::string message;
  const ExplodedNode *error_node = nullptr;
  const ExplodedGraph *graph = nullptr;
  SourceLocation loc;
  SourceRange range;
  std::vector<std::shared_ptr<BugVisitor>> visitors;
};

class SymbolReaper {
public:
  bool isLive(SymbolId s) const { return syms.count(s) > 0; }
  bool isLive(const MemRegion *r) const;
  std::set<SymbolId> syms;
  std::set<const MemRegion *> regions;
};

class Engine;

class CheckerContext {
public:
  CheckerContext(Engine &eng, ExplodedGraph &g, ExplodedNode *pred, ProgramPoint pp)
      : eng_(eng), g_(g), pred_(pred), pp_(std::move(pp)) {}

  const ProgramState &state() const { return pred_->state; }
  ExplodedNode *predecessor() const { return pred_; }
  const LocationContext *frame() const { return pp_.frame; }
  SymbolManager &symbols() { return g_.symbols; }
  RegionManager &regions() { return g_.regions; }
  const ProgramPoint &point() const { return pp_; }

  /// Rvalue of an already evaluated expression in the current frame.
  SVal getSVal(const Node *e) const;
  /// Lvalue region of an already evaluated expression, if any.
  const MemRegion *getRegion(const Node *e) const;

  /// Commits `st` as a new node. At most once per callback; a state equal
  /// to the predecessor's is a no-op.
  ExplodedNode *addTransition(const ProgramState &st);
  ExplodedNode *generateErrorNode(const ProgramState &st);
  void emitReport(BugReport r);

  bool transitioned() const { return transitioned_; }
  bool errored() const { return errored_; }
  ExplodedNode *result() const { return result_; }

private:
  Engine &eng_;
  ExplodedGraph &g_;
  ExplodedNode *pred_;
  ProgramPoint pp_;
  bool transitioned_ = false;
  bool errored_ = false;
  ExplodedNode *result_ = nullptr;
};

class Checker {
public:
  virtual ~Checker() = default;
  virtual std::string name() const = 0;
  virtual void registerSlots(SlotRegistry &) {}
  virtual void checkPreStmt(const Node *, CheckerContext &) {}
  virtual void checkPostStmt(const Node *, CheckerContext &) {}
  virtual void checkPreCall(const CallEvent &, CheckerContext &) {}
  virtual void checkPostCall(const CallEvent &, CheckerContext &) {}
  virtual void checkPostImplicitDtor(const Node *, const MemRegion *, CheckerContext &) {}
  virtual void checkDeadSymbols(const SymbolReaper &, CheckerContext &) {}
  /// `ret` is null for functions that fall off their end.
  virtual void checkEndFunction(const ReturnInfo *, CheckerContext &) {}
};

struct ToolNote {
  SourceLocation loc;
  std::string message;
};

struct AnalysisResult {
  std::map<const Node *, std::unique_ptr<cfg::Cfg>> cfgs;
  std::vector<std::unique_ptr<ExplodedGraph>> graphs;
  std::vector<BugReport> reports; // deduplicated, in discovery order
  std::vector<ToolNote> notes;

  const ExplodedGraph *graphFor(const std::string &fn_name) const;
};

std::optional<ProgramState> assume(const ProgramState &st, const SVal &v, bool truth);

class Engine {
public:
  Engine(const Unit &unit, AnalysisOptions opts = {});
  ~Engine();

  /// Takes ownership; registers the checker's state slots.
  Checker *addChecker(std::unique_ptr<Checker> c);
  SlotRegistry &slots() { return slots_; }

  /// Analyzes every top-level function not inlined by an earlier one.
  /// Functions nobody calls go first, then the rest, in source order.
  AnalysisResult run();
  /// Analyzes a single function as top level.
  AnalysisResult runFunction(const std::string &name);

  // Used by CheckerContext.
  void report(BugReport r);
  SVal rvalueOf(const ProgramState &st, const LocationContext *f, const Node *e,
                ExplodedGraph &g) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SlotRegistry slots_;
};

/// DOT rendering; each label carries the point, store bindings and constraints.
std::string dumpGraph(const ExplodedGraph &g);

} // namespace minisa::sym
