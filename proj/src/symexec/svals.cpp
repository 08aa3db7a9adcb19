#include "minisa/symexec/svals.h"

#include "minisa/symexec/rangeset.h"

#include <stdexcept>

namespace minisa::sym {

SymbolId SymbolManager::add(Symbol s) {
  s.id = static_cast<SymbolId>(syms_.size());
  syms_.push_back(std::move(s));
  return syms_.back().id;
}

SymbolId SymbolManager::conjure(const TypeRef &type, const Node *origin) {
  Symbol s;
  s.kind = Symbol::Kind::Conjured;
  s.type = type;
  s.origin = origin;
  SymbolId id = add(s);
  syms_[id].name = "$conj" + std::to_string(id);
  return id;
}

SymbolId SymbolManager::param(const Node *p) {
  Symbol s;
  s.kind = Symbol::Kind::Param;
  s.type = p->type ? p->type->unqualified() : TypeRef();
  s.origin = p;
  s.name = "$" + p->name;
  return add(s);
}

SymbolId SymbolManager::refParam(const Node *p) {
  Symbol s;
  s.kind = Symbol::Kind::RefParam;
  s.type = p->type ? p->type->unqualified().addPointer() : TypeRef();
  s.origin = p;
  s.name = "$&" + p->name;
  return add(s);
}

SymbolId SymbolManager::derived(const std::string &key, const TypeRef &type) {
  auto it = derived_.find(key);
  if (it != derived_.end())
    return it->second;
  Symbol s;
  s.kind = Symbol::Kind::Derived;
  s.type = type;
  SymbolId id = add(s);
  syms_[id].name = "$derived" + std::to_string(id);
  derived_[key] = id;
  return id;
}

// ---- SymExpr ----

SymExprRef SymExpr::symbol(SymbolId s) {
  auto e = std::make_shared<SymExpr>();
  e->kind = Kind::Sym;
  e->sym = s;
  return e;
}

SymExprRef SymExpr::constant(int64_t v) {
  auto e = std::make_shared<SymExpr>();
  e->kind = Kind::Const;
  e->value = v;
  return e;
}

SymExprRef SymExpr::binop(const SymExprRef &lhs, char op, int64_t c) {
  if (lhs->kind == Kind::Const)
    return constant(wrapArith(lhs->value, op, c));
  if (op == '-')
    return binop(lhs, '+', wrapArith(0, '-', c));
  if (op == '+' && c == 0)
    return lhs;
  if (op == '*' && c == 1)
    return lhs;
  if (op == '*' && c == 0)
    return constant(0);
  if (lhs->kind == Kind::IntOp && lhs->op == op && (op == '+' || op == '*'))
    return binop(lhs->lhs, op, wrapArith(lhs->value, op, c));
  auto e = std::make_shared<SymExpr>();
  e->kind = Kind::IntOp;
  e->lhs = lhs;
  e->op = op;
  e->value = c;
  return e;
}

std::optional<std::pair<SymbolId, int64_t>> SymExpr::linear() const {
  if (kind == Kind::Sym)
    return std::make_pair(sym, int64_t{0});
  if (kind == Kind::IntOp && op == '+' && lhs->kind == Kind::Sym)
    return std::make_pair(lhs->sym, value);
  return std::nullopt;
}

void SymExpr::collect(std::set<SymbolId> &out) const {
  if (kind == Kind::Sym)
    out.insert(sym);
  else if (kind == Kind::IntOp)
    lhs->collect(out);
}

std::string SymExpr::str(const SymbolManager &sm) const {
  switch (kind) {
  case Kind::Sym:
    return sm.get(sym).name;
  case Kind::Const:
    return std::to_string(value);
  case Kind::IntOp: {
    std::string l = lhs->str(sm);
    if (lhs->kind == Kind::IntOp)
      l = "(" + l + ")";
    if (op == '+' && value < 0 && value != kIMin)
      return l + "-" + std::to_string(-value);
    return l + op + std::to_string(value);
  }
  }
  return "?";
}

bool SymExpr::equals(const SymExpr &o) const {
  if (kind != o.kind)
    return false;
  switch (kind) {
  case Kind::Sym: return sym == o.sym;
  case Kind::Const: return value == o.value;
  case Kind::IntOp: return op == o.op && value == o.value && lhs->equals(*o.lhs);
  }
  return false;
}

// ---- regions ----

bool MemRegion::isSubRegionOf(const MemRegion *r) const {
  for (const MemRegion *p = this; p; p = p->parent)
    if (p == r)
      return true;
  return false;
}

const MemRegion *MemRegion::base() const {
  const MemRegion *p = this;
  while (p->parent)
    p = p->parent;
  return p;
}

std::string MemRegion::name(const SymbolManager &sm) const {
  switch (kind) {
  case Kind::Var:
    return decl->name;
  case Kind::Field:
    return parent->name(sm) + "." + field;
  case Kind::Heap:
    return "HeapObj{" + sm.get(sym).name + "}";
  case Kind::Symbolic:
    if (!display.empty())
      return display;
    return "*" + sm.get(sym).name;
  }
  return "?";
}

const MemRegion *RegionManager::intern(std::tuple<int, const void *, int, std::string> key,
                                       MemRegion r) {
  auto it = index_.find(key);
  if (it != index_.end())
    return it->second;
  r.id = static_cast<int>(regions_.size());
  regions_.push_back(std::move(r));
  const MemRegion *p = &regions_.back();
  index_[key] = p;
  return p;
}

const MemRegion *RegionManager::var(const Node *decl, int frame) {
  MemRegion r;
  r.kind = MemRegion::Kind::Var;
  r.decl = decl;
  r.frame = frame;
  r.type = decl->type ? decl->type->unqualified() : TypeRef();
  if (decl->type && decl->type->is_reference)
    r.type = decl->type->unqualified().addPointer(); // holds the referent
  return intern({0, decl, frame, {}}, r);
}

const MemRegion *RegionManager::field(const MemRegion *parent, const std::string &name,
                                      const TypeRef &type) {
  MemRegion r;
  r.kind = MemRegion::Kind::Field;
  r.parent = parent;
  r.field = name;
  r.type = type.unqualified();
  return intern({1, parent, 0, name}, r);
}

const MemRegion *RegionManager::heap(SymbolId handle, const TypeRef &type) {
  MemRegion r;
  r.kind = MemRegion::Kind::Heap;
  r.sym = handle;
  r.type = type.unqualified();
  return intern({2, nullptr, handle, {}}, r);
}

const MemRegion *RegionManager::symbolic(SymbolId sym, const TypeRef &pointee,
                                         std::string display) {
  MemRegion r;
  r.kind = MemRegion::Kind::Symbolic;
  r.sym = sym;
  r.type = pointee.unqualified();
  r.display = std::move(display);
  return intern({3, nullptr, sym, {}}, r);
}

// ---- SVal ----

SVal SVal::integer(int64_t v) {
  SVal s = make(Kind::Int);
  s.i = v;
  return s;
}

SVal SVal::symbolic(SymExprRef e) {
  if (e->kind == SymExpr::Kind::Const)
    return integer(e->value);
  SVal s = make(Kind::Sym);
  s.sym = std::move(e);
  return s;
}

SVal SVal::loc(const MemRegion *r) {
  SVal s = make(Kind::Loc);
  s.region = r;
  return s;
}

SVal SVal::cond(SymExprRef lhs, std::string op, int64_t rhs) {
  SVal s = make(Kind::Cond);
  s.sym = std::move(lhs);
  s.op = std::move(op);
  s.i = rhs;
  return s;
}

std::optional<SymbolId> SVal::asSymbol() const {
  if (kind == Kind::Sym && sym->kind == SymExpr::Kind::Sym)
    return sym->sym;
  if (kind == Kind::Loc && region->sym >= 0 &&
      (region->kind == MemRegion::Kind::Heap || region->kind == MemRegion::Kind::Symbolic))
    return region->sym;
  return std::nullopt;
}

void SVal::collect(std::set<SymbolId> &syms, std::set<const MemRegion *> &regions) const {
  if (sym)
    sym->collect(syms);
  if (region) {
    for (const MemRegion *r = region; r; r = r->parent) {
      regions.insert(r);
      if (r->sym >= 0)
        syms.insert(r->sym);
    }
  }
}

std::string SVal::str(const SymbolManager &sm) const {
  switch (kind) {
  case Kind::Undefined: return "Undefined";
  case Kind::Unknown: return "Unknown";
  case Kind::Int: return std::to_string(i);
  case Kind::Sym: return sym->str(sm);
  case Kind::Loc: return "&" + region->name(sm);
  case Kind::Null: return "null";
  case Kind::Cond: return "(" + sym->str(sm) + " " + op + " " + std::to_string(i) + ")";
  }
  return "?";
}

bool SVal::operator==(const SVal &o) const {
  if (kind != o.kind)
    return false;
  switch (kind) {
  case Kind::Undefined:
  case Kind::Unknown:
  case Kind::Null:
    return true;
  case Kind::Int: return i == o.i;
  case Kind::Sym: return sym->equals(*o.sym);
  case Kind::Loc: return region == o.region;
  case Kind::Cond: return op == o.op && i == o.i && sym->equals(*o.sym);
  }
  return false;
}

std::string negateOp(const std::string &op) {
  if (op == "==") return "!=";
  if (op == "!=") return "==";
  if (op == "<") return ">=";
  if (op == "<=") return ">";
  if (op == ">") return "<=";
  if (op == ">=") return "<";
  throw std::invalid_argument("not a comparison: " + op);
}

std::string flipOp(const std::string &op) {
  if (op == "<") return ">";
  if (op == "<=") return ">=";
  if (op == ">") return "<";
  if (op == ">=") return "<=";
  return op;
}

int64_t wrapArith(int64_t a, char op, int64_t b) {
  uint64_t x = static_cast<uint64_t>(a), y = static_cast<uint64_t>(b);
  switch (op) {
  case '+': return static_cast<int64_t>(x + y);
  case '-': return static_cast<int64_t>(x - y);
  case '*': return static_cast<int64_t>(x * y);
  case '/':
    if (b == 0)
      throw std::domain_error("division by zero");
    if (a == kIMin && b == -1)
      return a;
    return a / b;
  }
  throw std::invalid_argument("bad arithmetic operator");
}

} // namespace minisa::sym
