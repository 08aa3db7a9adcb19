#include "minisa/symexec/state.h"

namespace minisa::sym {

int SlotRegistry::registerSlot(const std::string &key) {
  for (const std::string &n : names_)
    if (n == key)
      throw ConfigError("state slot '" + key + "' registered twice");
  names_.push_back(key);
  return static_cast<int>(names_.size()) - 1;
}

struct ProgramState::Impl {
  std::map<std::pair<int, int>, SVal> env;
  std::map<const MemRegion *, SVal, RegionLess> store;
  std::map<SymbolId, RangeSet> constraints;
  std::map<int, SlotRef> slots;
  std::map<std::pair<int, int>, int> loops;
  std::map<int, ReturnInfo> returns;
};

ProgramState::ProgramState() : impl_(std::make_shared<const Impl>()) {}

std::shared_ptr<ProgramState::Impl> ProgramState::mut() const {
  return std::make_shared<Impl>(*impl_);
}

std::optional<SVal> ProgramState::env(int frame, const Node *e) const {
  auto it = impl_->env.find({frame, e->id});
  if (it == impl_->env.end())
    return std::nullopt;
  return it->second;
}

ProgramState ProgramState::bindEnv(int frame, const Node *e, SVal v) const {
  auto m = mut();
  m->env[{frame, e->id}] = std::move(v);
  return ProgramState(m);
}

ProgramState ProgramState::clearEnv(int frame) const {
  auto lo = impl_->env.lower_bound({frame, -1});
  if (lo == impl_->env.end() || lo->first.first != frame)
    return *this;
  auto m = mut();
  for (auto it = m->env.lower_bound({frame, -1}); it != m->env.end() && it->first.first == frame;)
    it = m->env.erase(it);
  return ProgramState(m);
}

const std::map<std::pair<int, int>, SVal> &ProgramState::environment() const {
  return impl_->env;
}

std::optional<SVal> ProgramState::lookup(const MemRegion *r) const {
  auto it = impl_->store.find(r);
  if (it == impl_->store.end())
    return std::nullopt;
  return it->second;
}

ProgramState ProgramState::bind(const MemRegion *r, SVal v) const {
  auto m = mut();
  m->store[r] = std::move(v);
  return ProgramState(m);
}

ProgramState ProgramState::unbind(const MemRegion *r) const {
  if (!impl_->store.count(r))
    return *this;
  auto m = mut();
  m->store.erase(r);
  return ProgramState(m);
}

const std::map<const MemRegion *, SVal, RegionLess> &ProgramState::store() const {
  return impl_->store;
}

RangeSet ProgramState::rangeOf(SymbolId s) const {
  auto it = impl_->constraints.find(s);
  return it == impl_->constraints.end() ? RangeSet::full() : it->second;
}

bool ProgramState::isConstrained(SymbolId s) const { return impl_->constraints.count(s) > 0; }

ProgramState ProgramState::setConstraint(SymbolId s, const RangeSet &r) const {
  if (r.isFull())
    return removeConstraint(s);
  auto m = mut();
  m->constraints[s] = r;
  return ProgramState(m);
}

ProgramState ProgramState::removeConstraint(SymbolId s) const {
  if (!impl_->constraints.count(s))
    return *this;
  auto m = mut();
  m->constraints.erase(s);
  return ProgramState(m);
}

const std::map<SymbolId, RangeSet> &ProgramState::constraints() const {
  return impl_->constraints;
}

SlotRef ProgramState::slot(int handle) const {
  auto it = impl_->slots.find(handle);
  return it == impl_->slots.end() ? nullptr : it->second;
}

ProgramState ProgramState::setSlot(int handle, SlotRef data) const {
  auto m = mut();
  if (!data || data->empty())
    m->slots.erase(handle);
  else
    m->slots[handle] = std::move(data);
  return ProgramState(m);
}

const std::map<int, SlotRef> &ProgramState::slots() const { return impl_->slots; }

int ProgramState::loopCount(int frame, int block) const {
  auto it = impl_->loops.find({frame, block});
  return it == impl_->loops.end() ? 0 : it->second;
}

ProgramState ProgramState::setLoopCount(int frame, int block, int n) const {
  auto m = mut();
  m->loops[{frame, block}] = n;
  return ProgramState(m);
}

ProgramState ProgramState::clearFrame(int frame) const {
  auto m = mut();
  for (auto it = m->loops.begin(); it != m->loops.end();)
    it = it->first.first == frame ? m->loops.erase(it) : std::next(it);
  m->returns.erase(frame);
  return ProgramState(m);
}

std::optional<ReturnInfo> ProgramState::returnValue(int frame) const {
  auto it = impl_->returns.find(frame);
  if (it == impl_->returns.end())
    return std::nullopt;
  return it->second;
}

ProgramState ProgramState::setReturn(int frame, ReturnInfo info) const {
  auto m = mut();
  m->returns[frame] = std::move(info);
  return ProgramState(m);
}

const std::map<int, ReturnInfo> &ProgramState::returns() const { return impl_->returns; }

namespace {

std::string exprKey(const SymExpr &e) {
  switch (e.kind) {
  case SymExpr::Kind::Sym: return "s" + std::to_string(e.sym);
  case SymExpr::Kind::Const: return std::to_string(e.value);
  case SymExpr::Kind::IntOp:
    return "(" + exprKey(*e.lhs) + e.op + std::to_string(e.value) + ")";
  }
  return "?";
}

} // namespace

std::string svalKey(const SVal &v) {
  switch (v.kind) {
  case SVal::Kind::Undefined: return "U";
  case SVal::Kind::Unknown: return "?";
  case SVal::Kind::Int: return "i" + std::to_string(v.i);
  case SVal::Kind::Sym: return exprKey(*v.sym);
  case SVal::Kind::Loc: return "L" + std::to_string(v.region->id);
  case SVal::Kind::Null: return "N";
  case SVal::Kind::Cond: return "c(" + exprKey(*v.sym) + v.op + std::to_string(v.i) + ")";
  }
  return "";
}

std::string ProgramState::key() const {
  std::string k = "E";
  for (const auto &[ek, v] : impl_->env)
    k += std::to_string(ek.first) + "." + std::to_string(ek.second) + "=" + svalKey(v) + ";";
  k += "S";
  for (const auto &[r, v] : impl_->store)
    k += std::to_string(r->id) + "=" + svalKey(v) + ";";
  k += "C";
  for (const auto &[s, r] : impl_->constraints) {
    k += std::to_string(s) + ":";
    for (const auto &iv : r.intervals())
      k += std::to_string(iv.first) + "," + std::to_string(iv.second) + ";";
  }
  k += "G";
  for (const auto &[h, d] : impl_->slots)
    k += std::to_string(h) + "{" + d->key() + "}";
  k += "L";
  for (const auto &[lk, n] : impl_->loops)
    k += std::to_string(lk.first) + "." + std::to_string(lk.second) + "=" + std::to_string(n) + ";";
  k += "R";
  for (const auto &[f, r] : impl_->returns)
    k += std::to_string(f) + "=" + svalKey(r.value) + "@" +
         std::to_string(r.stmt ? r.stmt->id : -1) + ";";
  return k;
}

bool ProgramState::operator==(const ProgramState &o) const {
  return impl_ == o.impl_ || key() == o.key();
}

std::string ProgramState::dumpStore(const SymbolManager &sm) const {
  std::string out;
  for (const auto &[r, v] : impl_->store) {
    if (r->kind == MemRegion::Kind::Var && r->decl->type && r->decl->type->is_reference)
      continue;
    if (!out.empty())
      out += ", ";
    out += r->name(sm) + ": " + v.str(sm);
  }
  return out;
}

std::string ProgramState::dumpConstraints(const SymbolManager &sm) const {
  std::string out;
  for (const auto &[s, r] : impl_->constraints)
    out += sm.get(s).name + " : " + r.toString() + "\n";
  return out;
}

} // namespace minisa::sym
