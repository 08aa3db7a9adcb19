#include "minisa/checkers/checkers.h"

#include <algorithm>
#include <sstream>

namespace minisa::checkers {

using sym::CheckerContext;
using sym::SVal;

// ---- registry ----

const std::vector<CheckerDescriptor> &builtinCheckers() {
  static const std::vector<CheckerDescriptor> list = {
      {"core.DivideZero", "Check for division by zero", {}},
      {"cplusplus.InnerPointer",
       "Check for inner pointers of C++ containers used after re/deallocation",
       {"unix.MallocLite"}},
      {"unix.MallocLite", "Check for use-after-free and double delete of memory from new", {}},
  };
  return list;
}

std::string checkerHelp(const std::vector<CheckerDescriptor> &list) {
  std::ostringstream os;
  os << "OVERVIEW: MiniLang Static Analyzer Checkers List\n\n"
     << "USAGE: --checker=<CHECKER or PACKAGE,...>\n\n"
     << "CHECKERS:\n";
  for (const auto &d : list) {
    std::string name = d.name;
    if (name.size() < 26)
      name.resize(26, ' ');
    else
      name += ' ';
    os << "  " << name << d.help << "\n";
  }
  return os.str();
}

CheckerSelection selectCheckers(const std::string &spec) {
  CheckerSelection sel;
  const auto &all = builtinCheckers();
  std::vector<std::string> tokens;
  std::stringstream ss(spec);
  for (std::string t; std::getline(ss, t, ',');) {
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
    if (!t.empty())
      tokens.push_back(t);
  }
  if (tokens.empty())
    for (const auto &d : all)
      sel.requested.insert(d.name);
  for (const std::string &t : tokens) {
    bool hit = false;
    for (const auto &d : all)
      if (d.name == t || d.name.rfind(t + ".", 0) == 0) {
        sel.requested.insert(d.name);
        hit = true;
      }
    if (!hit)
      throw sym::ConfigError("no checker or package named '" + t + "'");
  }
  std::vector<std::string> work(sel.requested.begin(), sel.requested.end());
  while (!work.empty()) {
    std::string n = work.back();
    work.pop_back();
    if (!sel.enabled.insert(n).second)
      continue;
    for (const auto &d : all)
      if (d.name == n)
        work.insert(work.end(), d.deps.begin(), d.deps.end());
  }
  return sel;
}

void registerCheckers(sym::Engine &eng, const CheckerSelection &sel) {
  auto slots = std::make_shared<MemorySlots>();
  for (const auto &d : builtinCheckers()) {
    if (!sel.enabled.count(d.name))
      continue;
    if (d.name == "core.DivideZero")
      eng.addChecker(std::make_unique<DivZeroChecker>());
    else if (d.name == "cplusplus.InnerPointer")
      eng.addChecker(std::make_unique<InnerPointerChecker>(slots));
    else if (d.name == "unix.MallocLite")
      eng.addChecker(
          std::make_unique<MallocLiteChecker>(slots, sel.requested.count(d.name) > 0));
  }
}

// ---- slot data ----

std::string RegionStateMap::key() const {
  std::string k;
  for (const auto &[s, r] : entries)
    k += std::to_string(s) + ":" + std::to_string(static_cast<int>(r.status)) +
         std::to_string(static_cast<int>(r.family)) + "@" +
         std::to_string(r.origin ? r.origin->id : -1) + ";";
  return k;
}

std::string RegionStateMap::dump(const sym::SymbolManager &sm) const {
  std::string out = "RegionState:";
  for (const auto &[s, r] : entries) {
    out += " " + sm.get(s).name + "=" + (r.isReleased() ? "Released" : "Allocated");
    out += r.family == RefState::Family::Heap ? "(Heap)" : "(InnerBuffer)";
  }
  return out;
}

std::string RawPtrMap::key() const {
  std::string k;
  for (const auto &[r, set] : entries) {
    k += std::to_string(r->id) + "{";
    for (SymbolId s : set)
      k += std::to_string(s) + ",";
    k += "}";
  }
  return k;
}

std::string RawPtrMap::dump(const sym::SymbolManager &sm) const {
  std::string out = "RawPtrMap:";
  for (const auto &[r, set] : entries) {
    out += " " + r->name(sm) + "={";
    bool first = true;
    for (SymbolId s : set) {
      out += (first ? "" : ", ") + sm.get(s).name;
      first = false;
    }
    out += "}";
  }
  return out;
}

namespace {

const RegionStateMap *regionStates(const ProgramState &st, const MemorySlots &h) {
  return static_cast<const RegionStateMap *>(st.slot(h.region_state).get());
}

const RawPtrMap *rawPtrs(const ProgramState &st, const MemorySlots &h) {
  return static_cast<const RawPtrMap *>(st.slot(h.raw_ptr).get());
}

ProgramState setRefState(const ProgramState &st, const MemorySlots &h, SymbolId s,
                         const RefState &rs) {
  auto m = std::make_shared<RegionStateMap>();
  if (auto *old = regionStates(st, h))
    m->entries = old->entries;
  auto it = m->entries.find(s);
  if (it != m->entries.end() && it->second == rs)
    return st;
  m->entries[s] = rs;
  return st.setSlot(h.region_state, m);
}

bool isTrackedIn(const ProgramState &st, const MemorySlots &h, SymbolId s) {
  if (auto *m = rawPtrs(st, h))
    for (const auto &[r, set] : m->entries)
      if (set.count(s))
        return true;
  return false;
}

std::string containerType(const MemRegion *r) {
  return r ? r->type.spelling() : std::string("string");
}

} // namespace

namespace allocation_state {

const RefState *getRefState(const ProgramState &st, const MemorySlots &h, SymbolId s) {
  auto *m = regionStates(st, h);
  if (!m)
    return nullptr;
  auto it = m->entries.find(s);
  return it == m->entries.end() ? nullptr : &it->second;
}

ProgramState markReleased(const ProgramState &st, const MemorySlots &h, SymbolId s,
                          const Node *origin) {
  return setRefState(st, h, s,
                     {RefState::Status::Released, RefState::Family::InnerBuffer, origin});
}

const MemRegion *getContainerObjRegion(const ProgramState &st, const MemorySlots &h, SymbolId s) {
  if (auto *m = rawPtrs(st, h))
    for (const auto &[r, set] : m->entries)
      if (set.count(s))
        return r;
  return nullptr;
}

} // namespace allocation_state

std::string releaseCallName(const Node *origin) {
  if (!origin)
    return "unknown";
  switch (origin->kind) {
  case NodeKind::Call:
  case NodeKind::MethodCall:
    return origin->name;
  case NodeKind::Assign:
    return origin->op == "+=" ? "operator+=" : "operator=";
  default:
    return "unknown";
  }
}

// ---- visitors ----

std::optional<sym::PathPiece> MallocBugVisitor::visitNode(const sym::ExplodedNode *n,
                                                          const sym::ExplodedNode *pred,
                                                          const sym::BugReport &) {
  if (!pred)
    return std::nullopt;
  const RefState *now = allocation_state::getRefState(n->state, h_, sym_);
  const RefState *before = allocation_state::getRefState(pred->state, h_, sym_);
  if (!now || !now->isReleased() || (before && before->isReleased()))
    return std::nullopt;
  sym::PathPiece p;
  p.loc = n->point.location();
  if (now->family == RefState::Family::Heap) {
    p.message = "Memory is released";
    return p;
  }
  std::string type = containerType(allocation_state::getContainerObjRegion(pred->state, h_, sym_));
  p.message = "Inner buffer of '" + type + "' ";
  if (n->point.kind == sym::ProgramPoint::Kind::PostImplicitCall)
    p.message += "deallocated by call to destructor";
  else
    p.message += "reallocated by call to '" + releaseCallName(now->origin) + "'";
  return p;
}

std::optional<sym::PathPiece> InnerPointerBRVisitor::visitNode(const sym::ExplodedNode *n,
                                                               const sym::ExplodedNode *pred,
                                                               const sym::BugReport &) {
  if (!pred || !isTrackedIn(n->state, h_, sym_) || isTrackedIn(pred->state, h_, sym_))
    return std::nullopt;
  sym::PathPiece p;
  p.loc = n->point.location();
  p.message = "Pointer to inner buffer of '" +
              containerType(allocation_state::getContainerObjRegion(n->state, h_, sym_)) +
              "' obtained here";
  return p;
}

// ---- MallocLite ----

void MallocLiteChecker::registerSlots(sym::SlotRegistry &reg) {
  h_->region_state = reg.registerSlot("RegionState");
}

void MallocLiteChecker::reportSimple(const std::string &msg, const Node *site,
                                     CheckerContext &ctx) {
  sym::ExplodedNode *err = ctx.generateErrorNode(ctx.state());
  if (!err)
    return;
  sym::BugReport r;
  r.checker = name();
  r.bug_type = msg == "Attempt to free released memory" ? "Double free" : "Bad free";
  r.category = "Memory error";
  r.message = msg;
  r.error_node = err;
  r.loc = site->range.begin;
  r.range = site->range;
  ctx.emitReport(std::move(r));
}

bool MallocLiteChecker::checkUse(const SVal &v, const Node *site, CheckerContext &ctx) {
  auto s = v.asSymbol();
  if (!s)
    return false;
  const RefState *rs = allocation_state::getRefState(ctx.state(), *h_, *s);
  if (!rs || !rs->isReleased())
    return false;
  bool inner = rs->family == RefState::Family::InnerBuffer;
  if (!inner && !report_heap_)
    return false;
  sym::ExplodedNode *err = ctx.generateErrorNode(ctx.state());
  if (!err)
    return true;
  sym::BugReport r;
  r.checker = inner ? "cplusplus.InnerPointer" : name();
  r.bug_type = "Use-after-free";
  r.category = "Memory error";
  r.message = inner ? "Inner pointer of container used after re/deallocation"
                    : "Use of memory after it is freed";
  r.error_node = err;
  r.loc = site->range.begin;
  r.range = site->range;
  r.visitors.push_back(std::make_shared<MallocBugVisitor>(*h_, *s));
  if (inner)
    r.visitors.push_back(std::make_shared<InnerPointerBRVisitor>(*h_, *s));
  ctx.emitReport(std::move(r));
  return true;
}

void MallocLiteChecker::checkPreStmt(const Node *s, CheckerContext &ctx) {
  switch (s->kind) {
  case NodeKind::UnaryOp:
    if (s->op == "*")
      checkUse(ctx.getSVal(s->child(0)), s, ctx);
    return;
  case NodeKind::FieldAccess:
  case NodeKind::MethodCall:
    if (s->is_arrow)
      checkUse(ctx.getSVal(s->child(0)), s, ctx);
    return;
  case NodeKind::ReturnStmt:
    if (!s->children.empty())
      checkUse(ctx.getSVal(s->child(0)), s, ctx);
    return;
  case NodeKind::DeleteStmt: {
    SVal v = ctx.getSVal(s->child(0));
    if (v.kind == SVal::Kind::Null || (v.kind == SVal::Kind::Int && v.i == 0))
      return;
    if (v.kind == SVal::Kind::Loc && (v.region->kind == MemRegion::Kind::Var ||
                                      v.region->kind == MemRegion::Kind::Field)) {
      if (report_heap_)
        reportSimple("argument is not memory allocated by new", s, ctx);
      return;
    }
    auto sym = v.asSymbol();
    if (!sym)
      return;
    const RefState *rs = allocation_state::getRefState(ctx.state(), *h_, *sym);
    if (rs && rs->isReleased()) {
      if (report_heap_ || rs->family == RefState::Family::InnerBuffer)
        reportSimple("Attempt to free released memory", s, ctx);
      return;
    }
    ctx.addTransition(setRefState(ctx.state(), *h_, *sym,
                                  {RefState::Status::Released, RefState::Family::Heap, s}));
    return;
  }
  default:
    return;
  }
}

void MallocLiteChecker::checkPostStmt(const Node *s, CheckerContext &ctx) {
  if (s->kind != NodeKind::NewExpr)
    return;
  if (auto sym = ctx.getSVal(s).asSymbol())
    ctx.addTransition(setRefState(ctx.state(), *h_, *sym,
                                  {RefState::Status::Allocated, RefState::Family::Heap, s}));
}

void MallocLiteChecker::checkPreCall(const sym::CallEvent &call, CheckerContext &ctx) {
  for (size_t i = 0; i < call.args.size(); ++i)
    if (checkUse(call.args[i], call.arg_exprs[i], ctx))
      return;
}

void MallocLiteChecker::checkEndFunction(const sym::ReturnInfo *ret, CheckerContext &ctx) {
  if (ret && ret->stmt)
    checkUse(ret->value, ret->stmt, ctx);
}

void MallocLiteChecker::checkDeadSymbols(const sym::SymbolReaper &rp, CheckerContext &ctx) {
  const RegionStateMap *m = regionStates(ctx.state(), *h_);
  if (!m)
    return;
  auto next = std::make_shared<RegionStateMap>();
  for (const auto &[s, r] : m->entries)
    if (rp.isLive(s))
      next->entries.emplace(s, r);
  if (next->entries.size() != m->entries.size())
    ctx.addTransition(ctx.state().setSlot(h_->region_state, next));
}

// ---- InnerPointer ----

void InnerPointerChecker::registerSlots(sym::SlotRegistry &reg) {
  h_->raw_ptr = reg.registerSlot("RawPtrMap");
}

bool InnerPointerChecker::isInvalidatingMemberFunction(const sym::CallEvent &call) {
  switch (call.kind) {
  case sym::CallEvent::Kind::Method:
    return call.method && call.method->invalidates;
  case sym::CallEvent::Kind::Operator:
    return call.name == "operator=" || call.name == "operator+=";
  case sym::CallEvent::Kind::Destructor:
    return true;
  case sym::CallEvent::Kind::Function:
    return false;
  }
  return false;
}

ProgramState InnerPointerChecker::markPtrSymbolsReleased(ProgramState st, const MemRegion *r,
                                                         const Node *origin) const {
  const RawPtrMap *m = rawPtrs(st, *h_);
  if (!r || !m)
    return st;
  auto it = m->entries.find(r);
  if (it == m->entries.end())
    return st;
  for (SymbolId s : it->second)
    st = allocation_state::markReleased(st, *h_, s, origin);
  auto next = std::make_shared<RawPtrMap>(*m);
  next->entries.erase(r);
  return st.setSlot(h_->raw_ptr, next);
}

ProgramState InnerPointerChecker::checkFunctionArguments(ProgramState st,
                                                         const sym::CallEvent &call) const {
  if (!call.isLibraryCall())
    return st;
  for (size_t i = 0; i < call.param_types.size() && i < call.arg_regions.size(); ++i) {
    const TypeRef &t = call.param_types[i];
    if (!t.is_reference || t.is_const)
      continue;
    if (const MemRegion *r = call.arg_regions[i])
      st = markPtrSymbolsReleased(st, r, call.expr);
  }
  return st;
}

void InnerPointerChecker::checkPostCall(const sym::CallEvent &call, CheckerContext &ctx) {
  ProgramState st = ctx.state();
  if (call.kind == sym::CallEvent::Kind::Method && call.method && call.method->obtains_buffer) {
    auto s = call.ret.asSymbol();
    if (!s || !call.receiver)
      return;
    auto next = std::make_shared<RawPtrMap>();
    if (auto *m = rawPtrs(st, *h_))
      next->entries = m->entries;
    next->entries[call.receiver].insert(*s);
    ctx.addTransition(st.setSlot(h_->raw_ptr, next));
    return;
  }
  if (isInvalidatingMemberFunction(call))
    st = markPtrSymbolsReleased(st, call.receiver, call.expr);
  st = checkFunctionArguments(st, call);
  if (!st.sameData(ctx.state()))
    ctx.addTransition(st);
}

void InnerPointerChecker::checkPostImplicitDtor(const Node *, const MemRegion *r,
                                                CheckerContext &ctx) {
  ProgramState st = markPtrSymbolsReleased(ctx.state(), r, nullptr);
  if (!st.sameData(ctx.state()))
    ctx.addTransition(st);
}

void InnerPointerChecker::checkDeadSymbols(const sym::SymbolReaper &rp, CheckerContext &ctx) {
  const RawPtrMap *m = rawPtrs(ctx.state(), *h_);
  if (!m)
    return;
  auto next = std::make_shared<RawPtrMap>();
  bool changed = false;
  for (const auto &[r, set] : m->entries) {
    if (!rp.isLive(r)) {
      changed = true;
      continue;
    }
    std::set<SymbolId> keep;
    for (SymbolId s : set)
      if (rp.isLive(s))
        keep.insert(s);
    changed |= keep.size() != set.size();
    if (!keep.empty())
      next->entries.emplace(r, std::move(keep));
  }
  if (changed)
    ctx.addTransition(ctx.state().setSlot(h_->raw_ptr, next));
}

// ---- DivZero ----

void DivZeroChecker::checkPreStmt(const Node *s, CheckerContext &ctx) {
  if (s->kind != NodeKind::BinaryOp || s->op != "/")
    return;
  SVal d = ctx.getSVal(s->child(1));
  bool zero = d.kind == SVal::Kind::Int && d.i == 0;
  if (d.kind == SVal::Kind::Sym) {
    if (auto lin = d.sym->linear()) {
      auto only = ctx.state().rangeOf(lin->first).singleton();
      zero = only && sym::wrapArith(*only, '+', lin->second) == 0;
    }
  }
  if (zero) {
    sym::ExplodedNode *err = ctx.generateErrorNode(ctx.state());
    if (!err)
      return;
    sym::BugReport r;
    r.checker = name();
    r.bug_type = "Division by zero";
    r.category = "Logic error";
    r.message = "Division by zero";
    r.error_node = err;
    r.loc = s->op_loc;
    r.range = s->range;
    ctx.emitReport(std::move(r));
    return;
  }
  auto nz = sym::assume(ctx.state(), d, true);
  if (!nz) {
    ctx.generateErrorNode(ctx.state());
    return;
  }
  if (!nz->sameData(ctx.state()))
    ctx.addTransition(*nz);
}

} // namespace minisa::checkers
