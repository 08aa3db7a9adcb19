#include "minisa/symexec/engine.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace minisa::sym {

// ---- program points ----

const char *ProgramPoint::kindName() const {
  switch (kind) {
  case Kind::PreStmt: return "PreStmt";
  case Kind::PostStmt: return "PostStmt";
  case Kind::BlockEdge: return "BlockEdge";
  case Kind::CallEnter: return "CallEnter";
  case Kind::CallExit: return "CallExit";
  case Kind::PostImplicitCall: return "PostImplicitCall";
  }
  return "?";
}

std::string ProgramPoint::str() const {
  std::string s = kindName();
  switch (kind) {
  case Kind::BlockEdge:
    s += " B" + std::to_string(from) + " -> B" + std::to_string(to);
    break;
  case Kind::CallEnter:
  case Kind::CallExit:
    if (frame && frame->fn)
      s += " " + frame->fn->name;
    break;
  case Kind::PostImplicitCall:
    s += " ~string() " + var->name + " " + std::to_string(loc.line) + ":" +
         std::to_string(loc.column);
    break;
  default:
    if (stmt) {
      s += std::string(" ") + nodeKindName(stmt->kind);
      if (!stmt->op.empty())
        s += " '" + stmt->op + "'";
      else if (!stmt->name.empty())
        s += " " + stmt->name;
      s += " " + std::to_string(stmt->range.begin.line) + ":" +
           std::to_string(stmt->range.begin.column);
    }
  }
  if (!tag.empty())
    s += " [" + tag + "]";
  return s;
}

SourceLocation ProgramPoint::location() const {
  if (kind == Kind::PostImplicitCall)
    return loc;
  if (stmt)
    return stmt->range.begin;
  return {};
}

std::string ProgramPoint::key() const {
  std::ostringstream os;
  os << static_cast<int>(kind) << ":" << (stmt ? stmt->id : -1) << ":" << from << ":" << to
     << ":" << (var ? var->id : -1) << ":" << (frame ? frame->id : -1) << ":" << tag;
  return os.str();
}

// ---- graph ----

std::pair<ExplodedNode *, bool> ExplodedGraph::getNode(const ProgramPoint &pp,
                                                       const ProgramState &st,
                                                       ExplodedNode *pred, int block, int elem,
                                                       bool sink) {
  std::string key = pp.key() + "|" + std::to_string(block) + "," + std::to_string(elem) +
                    (sink ? "|S|" : "|") + st.key();
  auto it = index_.find(key);
  if (it != index_.end()) {
    ExplodedNode *n = it->second;
    if (pred && std::find(n->preds.begin(), n->preds.end(), pred) == n->preds.end()) {
      n->preds.push_back(pred);
      pred->succs.push_back(n);
    }
    return {n, false};
  }
  if (static_cast<int>(nodes_.size()) >= budget_) {
    exhausted_ = true;
    return {nullptr, false};
  }
  ExplodedNode n;
  n.id = static_cast<int>(nodes_.size());
  n.point = pp;
  n.state = st;
  n.sink = sink;
  n.block = block;
  n.elem = elem;
  nodes_.push_back(std::move(n));
  ExplodedNode *p = &nodes_.back();
  if (pred) {
    p->preds.push_back(pred);
    pred->succs.push_back(p);
  } else {
    roots_.push_back(p);
  }
  index_[key] = p;
  return {p, true};
}

bool ExplodedGraph::contains(const ExplodedNode *n) const {
  return n && n->id >= 0 && n->id < static_cast<int>(nodes_.size()) && &nodes_[n->id] == n;
}

std::vector<const ExplodedNode *> ExplodedGraph::leaves() const {
  std::vector<const ExplodedNode *> out;
  for (const ExplodedNode &n : nodes_)
    if (!n.sink && n.succs.empty())
      out.push_back(&n);
  return out;
}

bool CallEvent::isLibraryCall() const {
  return kind != Kind::Function || (callee && callee->kind == NodeKind::ExternDecl);
}

bool SymbolReaper::isLive(const MemRegion *r) const {
  for (const MemRegion *p = r; p; p = p->parent) {
    if (regions.count(p))
      return true;
    if (p->sym >= 0 && syms.count(p->sym))
      return true;
  }
  return false;
}

const ExplodedGraph *AnalysisResult::graphFor(const std::string &fn_name) const {
  for (const auto &g : graphs)
    if (g->function()->name == fn_name)
      return g.get();
  return nullptr;
}

// ---- constraints ----

namespace {

std::optional<ProgramState> constrain(const ProgramState &st, const SymExprRef &e,
                                      const std::string &op, int64_t k) {
  auto lin = e->linear();
  if (!lin)
    return st;
  RangeSet want = RangeSet::satisfying(op, k).shift(wrapArith(0, '-', lin->second));
  RangeSet r = st.rangeOf(lin->first).intersect(want);
  if (r.empty())
    return std::nullopt;
  return st.setConstraint(lin->first, r);
}

} // namespace

std::optional<ProgramState> assume(const ProgramState &st, const SVal &v, bool truth) {
  switch (v.kind) {
  case SVal::Kind::Int:
    return ((v.i != 0) == truth) ? std::optional<ProgramState>(st) : std::nullopt;
  case SVal::Kind::Null:
    return truth ? std::nullopt : std::optional<ProgramState>(st);
  case SVal::Kind::Loc:
    if (v.region->kind == MemRegion::Kind::Symbolic)
      return constrain(st, SymExpr::symbol(v.region->sym), truth ? "!=" : "==", 0);
    return truth ? std::optional<ProgramState>(st) : std::nullopt;
  case SVal::Kind::Sym:
    return constrain(st, v.sym, truth ? "!=" : "==", 0);
  case SVal::Kind::Cond:
    return constrain(st, v.sym, truth ? v.op : negateOp(v.op), v.i);
  case SVal::Kind::Unknown:
  case SVal::Kind::Undefined:
    return st;
  }
  return st;
}

// ---- checker context ----

SVal CheckerContext::getSVal(const Node *e) const {
  return eng_.rvalueOf(state(), frame(), e, g_);
}

const MemRegion *CheckerContext::getRegion(const Node *e) const {
  auto v = state().env(frame()->id, e);
  return v && v->kind == SVal::Kind::Loc ? v->region : nullptr;
}

ExplodedNode *CheckerContext::addTransition(const ProgramState &st) {
  if (transitioned_ || errored_)
    throw std::logic_error("checker '" + pp_.tag + "' transitioned twice in one callback");
  transitioned_ = true;
  if (st.sameData(pred_->state) || st == pred_->state) {
    result_ = pred_;
    return pred_;
  }
  auto [n, is_new] = g_.getNode(pp_, st, pred_, pred_->block, pred_->elem);
  result_ = is_new ? n : nullptr;
  return n;
}

ExplodedNode *CheckerContext::generateErrorNode(const ProgramState &st) {
  if (transitioned_ || errored_)
    throw std::logic_error("checker '" + pp_.tag + "' transitioned twice in one callback");
  errored_ = true;
  auto [n, is_new] = g_.getNode(pp_, st, pred_, pred_->block, pred_->elem, true);
  (void)is_new;
  return n;
}

void CheckerContext::emitReport(BugReport r) {
  r.graph = &g_;
  eng_.report(std::move(r));
}

// ---- engine ----

using NodeSet = std::vector<ExplodedNode *>;

struct Engine::Impl {
  Impl(Engine &e, const Unit &u, AnalysisOptions o) : self(e), unit(u), opts(o) {}

  Engine &self;
  const Unit &unit;
  AnalysisOptions opts;
  std::vector<std::unique_ptr<Checker>> checkers;

  AnalysisResult *result = nullptr;
  ExplodedGraph *g = nullptr;
  std::deque<ExplodedNode *> worklist;
  std::set<const Node *> inlined;
  std::set<std::string> report_keys;
  bool null_deref_noted = false;

  struct Eval {
    ProgramState st;
    SVal v;
    bool sink = false;
  };

  // -- infrastructure --

  const cfg::Cfg &cfgFor(const Node *fn) {
    auto it = result->cfgs.find(fn);
    if (it != result->cfgs.end())
      return *it->second;
    auto c = std::make_unique<cfg::Cfg>(cfg::buildCfg(fn));
    for (const FrontendDiag &d : c->notes)
      result->notes.push_back({d.loc, d.message});
    const cfg::Cfg &ref = *c;
    result->cfgs[fn] = std::move(c);
    return ref;
  }

  const LocationContext *frameFor(const LocationContext *parent, const Node *call, const Node *fn,
                                  int block, int elem) {
    std::pair<int, int> key{parent ? parent->id : -1, call ? call->id : -1};
    auto it = g->frame_index.find(key);
    if (it != g->frame_index.end())
      return it->second;
    LocationContext lc;
    lc.id = static_cast<int>(g->frames.size());
    lc.parent = parent;
    lc.fn = fn;
    lc.cfg = &cfgFor(fn);
    lc.call_site = call;
    lc.call_block = block;
    lc.call_elem = elem;
    lc.depth = parent ? parent->depth + 1 : 0;
    g->frames.push_back(lc);
    g->frame_index[key] = &g->frames.back();
    return &g->frames.back();
  }

  static ProgramPoint point(ProgramPoint::Kind k, const LocationContext *f, const Node *s) {
    ProgramPoint pp;
    pp.kind = k;
    pp.frame = f;
    pp.stmt = s;
    return pp;
  }

  template <typename F> NodeSet dispatch(const NodeSet &in, const ProgramPoint &pp, F &&call) {
    NodeSet cur = in;
    for (auto &ch : checkers) {
      ProgramPoint tagged = pp;
      tagged.tag = ch->name();
      NodeSet next;
      for (ExplodedNode *n : cur) {
        CheckerContext ctx(self, *g, n, tagged);
        call(*ch, ctx);
        if (ctx.errored())
          continue;
        if (!ctx.transitioned())
          next.push_back(n);
        else if (ctx.result())
          next.push_back(ctx.result());
      }
      cur = std::move(next);
    }
    return cur;
  }

  void enqueue(const NodeSet &ns) {
    for (ExplodedNode *n : ns)
      worklist.push_back(n);
  }

  // -- values --

  SVal valueForSymbol(SymbolId s, const TypeRef &t) {
    if (t.isPointer())
      return SVal::loc(g->regions.symbolic(s, t.pointee()));
    if (t.isIntegral())
      return SVal::symbolic(SymExpr::symbol(s));
    return SVal::unknown();
  }

  SVal conjure(const TypeRef &t, const Node *origin) {
    if (!t.isScalar())
      return SVal::unknown();
    return valueForSymbol(g->symbols.conjure(t.unqualified(), origin), t);
  }

  SVal load(const ProgramState &st, const MemRegion *r) {
    if (auto v = st.lookup(r))
      return *v;
    for (const MemRegion *p = r->parent; p; p = p->parent)
      if (auto d = st.lookup(p); d && d->kind != SVal::Kind::Undefined)
        return valueForSymbol(
            g->symbols.derived("d" + std::to_string(r->id) + "/" + svalKey(*d), r->type), r->type);
    const MemRegion *b = r->base();
    if (b->kind == MemRegion::Kind::Var && b->decl->kind == NodeKind::VarDecl)
      return SVal::undefined();
    return valueForSymbol(g->symbols.derived("r" + std::to_string(r->id), r->type), r->type);
  }

  SVal rvalue(const ProgramState &st, const LocationContext *f, const Node *e) {
    auto v = st.env(f->id, e);
    if (!v)
      return SVal::unknown();
    if (isLValue(e)) {
      if (v->kind != SVal::Kind::Loc)
        return SVal::unknown();
      return load(st, v->region);
    }
    return *v;
  }

  static SVal convert(const SVal &v, const TypeRef &t) {
    if (t.isPointer() && v.kind == SVal::Kind::Int && v.i == 0)
      return SVal::null();
    return v;
  }

  struct Pointee {
    const MemRegion *region = nullptr;
    bool sink = false;
    ProgramState st;
  };

  Pointee pointee(const ProgramState &st, const SVal &ptr) {
    Pointee p;
    p.st = st;
    if (ptr.kind == SVal::Kind::Null || (ptr.kind == SVal::Kind::Int && ptr.i == 0)) {
      p.sink = true;
      return p;
    }
    if (ptr.kind != SVal::Kind::Loc)
      return p;
    if (ptr.region->kind == MemRegion::Kind::Symbolic) {
      auto nn = assume(st, ptr, true);
      if (!nn) {
        p.sink = true;
        return p;
      }
      p.st = *nn;
    }
    p.region = ptr.region;
    return p;
  }

  static SVal logicalNot(const SVal &v) {
    switch (v.kind) {
    case SVal::Kind::Int: return SVal::integer(v.i == 0);
    case SVal::Kind::Null: return SVal::integer(1);
    case SVal::Kind::Loc:
      if (v.region->kind == MemRegion::Kind::Symbolic)
        return SVal::cond(SymExpr::symbol(v.region->sym), "==", 0);
      return SVal::integer(0);
    case SVal::Kind::Sym: return SVal::cond(v.sym, "==", 0);
    case SVal::Kind::Cond: return SVal::cond(v.sym, negateOp(v.op), v.i);
    default: return SVal::unknown();
    }
  }

  static SVal truthValue(const SVal &v) {
    switch (v.kind) {
    case SVal::Kind::Int: return SVal::integer(v.i != 0);
    case SVal::Kind::Null: return SVal::integer(0);
    case SVal::Kind::Loc:
      if (v.region->kind == MemRegion::Kind::Symbolic)
        return SVal::cond(SymExpr::symbol(v.region->sym), "!=", 0);
      return SVal::integer(1);
    case SVal::Kind::Sym: return SVal::cond(v.sym, "!=", 0);
    case SVal::Kind::Cond: return v;
    default: return SVal::unknown();
    }
  }

  static bool compareInts(const std::string &op, int64_t a, int64_t b) {
    if (op == "==") return a == b;
    if (op == "!=") return a != b;
    if (op == "<") return a < b;
    if (op == "<=") return a <= b;
    if (op == ">") return a > b;
    return a >= b;
  }

  static SVal evalBinary(const std::string &op, SVal l, SVal r) {
    using K = SVal::Kind;
    if (op == "+" || op == "-" || op == "*" || op == "/") {
      char c = op[0];
      if (l.kind == K::Int && r.kind == K::Int) {
        if (c == '/' && r.i == 0)
          return SVal::unknown();
        return SVal::integer(wrapArith(l.i, c, r.i));
      }
      if (l.kind == K::Sym && r.kind == K::Int) {
        if (c == '/')
          return r.i == 1 ? l : SVal::unknown();
        return SVal::symbolic(SymExpr::binop(l.sym, c, r.i));
      }
      if (l.kind == K::Int && r.kind == K::Sym && (c == '+' || c == '*'))
        return SVal::symbolic(SymExpr::binop(r.sym, c, l.i));
      return SVal::unknown();
    }
    // comparisons
    auto isPtr = [](const SVal &v) { return v.kind == K::Loc || v.kind == K::Null; };
    if (isPtr(l) && r.kind == K::Int && r.i == 0)
      r = SVal::null();
    if (isPtr(r) && l.kind == K::Int && l.i == 0)
      l = SVal::null();
    bool eq = op == "==", ne = op == "!=";
    if (l.kind == K::Int && r.kind == K::Int)
      return SVal::integer(compareInts(op, l.i, r.i));
    if (l.kind == K::Null && r.kind == K::Null)
      return eq ? SVal::integer(1) : ne ? SVal::integer(0) : SVal::unknown();
    if ((l.kind == K::Loc && r.kind == K::Null) || (l.kind == K::Null && r.kind == K::Loc)) {
      const SVal &p = l.kind == K::Loc ? l : r;
      if (!eq && !ne)
        return SVal::unknown();
      if (p.region->kind == MemRegion::Kind::Symbolic)
        return SVal::cond(SymExpr::symbol(p.region->sym), op, 0);
      return SVal::integer(ne);
    }
    if (l.kind == K::Loc && r.kind == K::Loc) {
      if (!eq && !ne)
        return SVal::unknown();
      if (l.region == r.region)
        return SVal::integer(eq);
      if (l.region->kind != MemRegion::Kind::Symbolic && r.region->kind != MemRegion::Kind::Symbolic)
        return SVal::integer(ne);
      return SVal::unknown();
    }
    if (l.kind == K::Sym && r.kind == K::Int)
      return SVal::cond(l.sym, op, r.i);
    if (l.kind == K::Int && r.kind == K::Sym)
      return SVal::cond(r.sym, flipOp(op), l.i);
    return SVal::unknown();
  }

  Eval evalExpr(const ProgramState &st, const LocationContext *f, const Node *e) {
    Eval r{st, SVal::unknown(), false};
    auto env = [&](const Node *c) {
      auto v = st.env(f->id, c);
      return v ? *v : SVal::unknown();
    };
    switch (e->kind) {
    case NodeKind::IntLit:
    case NodeKind::BoolLit:
      r.v = SVal::integer(e->int_value);
      break;
    case NodeKind::DeclRef: {
      if (!e->decl || (e->decl->kind != NodeKind::VarDecl && e->decl->kind != NodeKind::ParamDecl))
        break;
      const MemRegion *reg = g->regions.var(e->decl, f->id);
      if (e->decl->type && e->decl->type->is_reference) {
        auto ref = st.lookup(reg);
        r.v = ref && ref->kind == SVal::Kind::Loc ? *ref : SVal::unknown();
      } else {
        r.v = SVal::loc(reg);
      }
      break;
    }
    case NodeKind::Paren:
    case NodeKind::AddressOf:
      r.v = env(e->child(0));
      break;
    case NodeKind::UnaryOp: {
      SVal x = rvalue(st, f, e->child(0));
      if (e->op == "*") {
        Pointee p = pointee(st, x);
        if (p.sink) {
          r.sink = true;
          break;
        }
        r.st = p.st;
        r.v = p.region ? SVal::loc(p.region) : SVal::unknown();
      } else if (e->op == "-") {
        if (x.kind == SVal::Kind::Int)
          r.v = SVal::integer(wrapArith(0, '-', x.i));
        else if (x.kind == SVal::Kind::Sym)
          r.v = SVal::symbolic(SymExpr::binop(x.sym, '*', -1));
      } else if (e->op == "!") {
        r.v = logicalNot(x);
      }
      break;
    }
    case NodeKind::BinaryOp: {
      if (e->op == ",") {
        r.v = rvalue(st, f, e->child(1));
      } else if (e->op == "&&" || e->op == "||") {
        if (st.env(f->id, e->child(1)))
          r.v = truthValue(rvalue(st, f, e->child(1)));
        else
          r.v = SVal::integer(e->op == "||");
      } else {
        r.v = evalBinary(e->op, rvalue(st, f, e->child(0)), rvalue(st, f, e->child(1)));
      }
      break;
    }
    case NodeKind::Assign: {
      SVal target = env(e->child(0));
      SVal v = rvalue(st, f, e->child(1));
      if (e->op == "+=") {
        SVal old = target.kind == SVal::Kind::Loc ? load(st, target.region) : SVal::unknown();
        v = evalBinary("+", old, v);
      }
      if (e->child(0)->type)
        v = convert(v, *e->child(0)->type);
      if (target.kind == SVal::Kind::Loc)
        r.st = st.bind(target.region, v);
      r.v = v;
      break;
    }
    case NodeKind::FieldAccess: {
      const MemRegion *base = nullptr;
      if (e->is_arrow) {
        Pointee p = pointee(st, rvalue(st, f, e->child(0)));
        if (p.sink) {
          r.sink = true;
          break;
        }
        r.st = p.st;
        base = p.region;
      } else {
        SVal b = env(e->child(0));
        base = b.kind == SVal::Kind::Loc ? b.region : nullptr;
      }
      if (base && e->type)
        r.v = SVal::loc(g->regions.field(base, e->name, *e->type));
      break;
    }
    case NodeKind::NewExpr: {
      SymbolId h = g->symbols.conjure(*e->type, e);
      r.v = SVal::loc(g->regions.heap(h, e->type->pointee()));
      break;
    }
    default:
      break;
    }
    return r;
  }

  // -- liveness --

  SymbolReaper computeLive(const ProgramState &st) {
    SymbolReaper rp;
    for (const auto &[k, v] : st.environment())
      v.collect(rp.syms, rp.regions);
    for (const auto &[r, v] : st.store()) {
      SVal::loc(r).collect(rp.syms, rp.regions);
      v.collect(rp.syms, rp.regions);
    }
    for (const auto &[f, ri] : st.returns())
      ri.value.collect(rp.syms, rp.regions);
    return rp;
  }

  NodeSet finishStmt(const NodeSet &in, const ProgramPoint &pp) {
    NodeSet out;
    for (ExplodedNode *n : in) {
      SymbolReaper rp = computeLive(n->state);
      ProgramState st = n->state;
      for (const auto &[s, r] : n->state.constraints())
        if (!rp.isLive(s))
          st = st.removeConstraint(s);
      ExplodedNode *m = n;
      if (!st.sameData(n->state)) {
        ProgramPoint reap = pp;
        reap.tag = "reap";
        auto [x, is_new] = g->getNode(reap, st, n, n->block, n->elem);
        if (!is_new)
          continue;
        m = x;
      }
      ProgramPoint dead = pp;
      NodeSet r = dispatch({m}, dead, [&](Checker &c, CheckerContext &ctx) {
        c.checkDeadSymbols(rp, ctx);
      });
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }

  // -- calls --

  CallEvent makeCallEvent(const ProgramState &st, const LocationContext *f, const Node *e) {
    CallEvent ev;
    ev.expr = e;
    std::vector<const Node *> args;
    if (e->kind == NodeKind::Call) {
      ev.kind = CallEvent::Kind::Function;
      ev.callee = e->decl;
      ev.name = e->name;
      { auto a = callArgs(e); args.assign(a.begin(), a.end()); }
      if (e->decl)
        for (const Node *p : functionParams(e->decl))
          ev.param_types.push_back(p->type ? *p->type : TypeRef());
    } else if (e->kind == NodeKind::MethodCall) {
      ev.kind = CallEvent::Kind::Method;
      ev.method = findStringMethod(e->name);
      ev.name = e->name;
      { auto a = callArgs(e); args.assign(a.begin(), a.end()); }
      if (ev.method)
        ev.param_types = ev.method->params;
      if (e->is_arrow) {
        SVal p = rvalue(st, f, e->child(0));
        ev.receiver = p.kind == SVal::Kind::Loc ? p.region : nullptr;
      } else {
        auto v = st.env(f->id, e->child(0));
        ev.receiver = v && v->kind == SVal::Kind::Loc ? v->region : nullptr;
      }
    } else { // string assignment
      ev.kind = CallEvent::Kind::Operator;
      ev.name = e->op == "+=" ? "operator+=" : "operator=";
      auto v = st.env(f->id, e->child(0));
      ev.receiver = v && v->kind == SVal::Kind::Loc ? v->region : nullptr;
      args = {e->child(1)};
      TypeRef p = TypeRef::make(TypeRef::Base::String, 0, true);
      p.is_reference = true;
      ev.param_types = {p};
    }
    for (const Node *a : args) {
      ev.arg_exprs.push_back(a);
      ev.args.push_back(rvalue(st, f, a));
      auto v = st.env(f->id, a);
      ev.arg_regions.push_back(isLValue(a) && v && v->kind == SVal::Kind::Loc ? v->region
                                                                               : nullptr);
    }
    ev.param_types.resize(ev.args.size());
    if (auto r = st.env(f->id, e))
      ev.ret = *r;
    return ev;
  }

  ProgramState invalidate(ProgramState st, const MemRegion *r, const Node *origin) {
    if (!r || r->type.isString())
      return st;
    for (const auto &[k, v] : ProgramState(st).store())
      if (k->isSubRegionOf(r) && k != r)
        st = st.bind(k, conjure(k->type, origin));
    if (r->type.isStruct())
      st = st.bind(r, SVal::symbolic(SymExpr::symbol(g->symbols.conjure(r->type, origin))));
    else
      st = st.bind(r, conjure(r->type, origin));
    return st;
  }

  ProgramState evalConservative(ProgramState st, const CallEvent &ev) {
    for (size_t i = 0; i < ev.args.size(); ++i) {
      const TypeRef &pt = ev.param_types[i];
      if (pt.is_reference && !pt.is_const)
        st = invalidate(st, ev.arg_regions[i], ev.expr);
      else if (pt.isPointer() && !pt.is_const && ev.args[i].kind == SVal::Kind::Loc)
        st = invalidate(st, ev.args[i].region, ev.expr);
    }
    return st;
  }

  SVal libraryReturn(const Node *e) {
    if (!e->type || e->type->isVoid())
      return SVal::unknown();
    return conjure(*e->type, e);
  }

  void postCall(ExplodedNode *pred, const ProgramState &st, const LocationContext *f,
                const Node *e, int block, int elem) {
    ProgramPoint pp = point(ProgramPoint::Kind::PostStmt, f, e);
    auto [m, is_new] = g->getNode(pp, st, pred, block, elem + 1);
    if (!is_new)
      return;
    NodeSet out = dispatch({m}, pp, [&](Checker &c, CheckerContext &ctx) {
      c.checkPostCall(makeCallEvent(ctx.state(), f, e), ctx);
    });
    out = dispatch(out, pp, [&](Checker &c, CheckerContext &ctx) { c.checkPostStmt(e, ctx); });
    enqueue(out);
  }

  NodeSet preCall(ExplodedNode *n, const LocationContext *f, const Node *e) {
    ProgramPoint pp = point(ProgramPoint::Kind::PreStmt, f, e);
    NodeSet pre = dispatch({n}, pp, [&](Checker &c, CheckerContext &ctx) { c.checkPreStmt(e, ctx); });
    return dispatch(pre, pp, [&](Checker &c, CheckerContext &ctx) {
      c.checkPreCall(makeCallEvent(ctx.state(), f, e), ctx);
    });
  }

  void bindParams(ProgramState &st, const LocationContext *callee, const CallEvent *ev) {
    auto params = functionParams(callee->fn);
    for (size_t i = 0; i < params.size(); ++i) {
      const Node *p = params[i];
      const MemRegion *reg = g->regions.var(p, callee->id);
      const TypeRef t = p->type ? *p->type : TypeRef();
      if (t.is_reference) {
        const MemRegion *target = nullptr;
        if (ev && i < ev->arg_regions.size())
          target = ev->arg_regions[i];
        if (!ev) {
          SymbolId s = g->symbols.refParam(p);
          target = g->regions.symbolic(s, t.unqualified(), p->name);
        }
        if (target)
          st = st.bind(reg, SVal::loc(target));
      } else if (t.isString()) {
        st = st.bind(reg, SVal::unknown());
      } else if (!ev) {
        if (t.isScalar())
          st = st.bind(reg, valueForSymbol(g->symbols.param(p), t.unqualified()));
      } else if (i < ev->args.size() && t.isScalar()) {
        st = st.bind(reg, convert(ev->args[i], t));
      }
    }
  }

  void processCall(ExplodedNode *n, const LocationContext *f, const Node *e) {
    for (ExplodedNode *p : preCall(n, f, e)) {
      const Node *callee = e->decl;
      bool has_body = callee && callee->kind == NodeKind::FunctionDecl && functionBody(callee);
      if (has_body && f->depth < opts.inline_depth) {
        const LocationContext *cf = frameFor(f, e, callee, n->block, n->elem);
        inlined.insert(callee);
        CallEvent ev = makeCallEvent(p->state, f, e);
        ProgramState st = p->state;
        bindParams(st, cf, &ev);
        auto [m, is_new] = g->getNode(point(ProgramPoint::Kind::CallEnter, cf, e), st, p,
                                      cf->cfg->entry, 0);
        if (is_new)
          enqueue({m});
        continue;
      }
      CallEvent ev = makeCallEvent(p->state, f, e);
      ProgramState st = evalConservative(p->state, ev);
      st = st.bindEnv(f->id, e, libraryReturn(e));
      if (callee && callee->is_noreturn) {
        g->getNode(point(ProgramPoint::Kind::PostStmt, f, e), st, p, n->block, n->elem + 1, true);
        continue;
      }
      postCall(p, st, f, e, n->block, n->elem);
    }
  }

  void processLibraryCall(ExplodedNode *n, const LocationContext *f, const Node *e) {
    for (ExplodedNode *p : preCall(n, f, e)) {
      ProgramState st = p->state;
      if (e->kind == NodeKind::MethodCall && e->is_arrow) {
        Pointee ptr = pointee(st, rvalue(st, f, e->child(0)));
        if (ptr.sink) {
          sinkNullDeref(p, f, e);
          continue;
        }
        st = ptr.st;
      }
      CallEvent ev = makeCallEvent(st, f, e);
      st = evalConservative(st, ev);
      SVal ret = e->kind == NodeKind::MethodCall ? libraryReturn(e) : SVal::unknown();
      st = st.bindEnv(f->id, e, ret);
      postCall(p, st, f, e, n->block, n->elem);
    }
  }

  void sinkNullDeref(ExplodedNode *p, const LocationContext *f, const Node *e) {
    ProgramPoint pp = point(ProgramPoint::Kind::PostStmt, f, e);
    pp.tag = "core.NullDereference";
    g->getNode(pp, p->state, p, p->block, p->elem + 1, true);
    result->notes.push_back({e->range.begin, "null pointer dereference; path abandoned"});
  }

  // -- elements --

  void processExpr(ExplodedNode *n, const LocationContext *f, const Node *e) {
    ProgramPoint pre = point(ProgramPoint::Kind::PreStmt, f, e);
    for (ExplodedNode *p : dispatch({n}, pre, [&](Checker &c, CheckerContext &ctx) {
           c.checkPreStmt(e, ctx);
         })) {
      Eval r = evalExpr(p->state, f, e);
      if (r.sink) {
        sinkNullDeref(p, f, e);
        continue;
      }
      ProgramPoint post = point(ProgramPoint::Kind::PostStmt, f, e);
      auto [m, is_new] = g->getNode(post, r.st.bindEnv(f->id, e, r.v), p, n->block, n->elem + 1);
      if (!is_new)
        continue;
      enqueue(dispatch({m}, post, [&](Checker &c, CheckerContext &ctx) { c.checkPostStmt(e, ctx); }));
    }
  }

  void processMarker(ExplodedNode *n, const LocationContext *f, const Node *s) {
    ProgramPoint pre = point(ProgramPoint::Kind::PreStmt, f, s);
    for (ExplodedNode *p : dispatch({n}, pre, [&](Checker &c, CheckerContext &ctx) {
           c.checkPreStmt(s, ctx);
         })) {
      ProgramState st = p->state;
      if (s->kind == NodeKind::VarDecl) {
        const MemRegion *reg = g->regions.var(s, f->id);
        const Node *init = varInit(s);
        TypeRef t = s->type ? *s->type : TypeRef();
        if (t.is_reference) {
          auto v = init ? st.env(f->id, init) : std::nullopt;
          if (v && v->kind == SVal::Kind::Loc)
            st = st.bind(reg, *v);
        } else if (t.isString()) {
          st = st.bind(reg, SVal::unknown());
        } else if (init) {
          st = st.bind(reg, convert(rvalue(st, f, init), t));
        }
      } else if (s->kind == NodeKind::ReturnStmt) {
        SVal v = SVal::unknown();
        if (!s->children.empty()) {
          v = rvalue(st, f, s->child(0));
          if (f->fn->type)
            v = convert(v, *f->fn->type);
        }
        st = st.setReturn(f->id, {v, s});
      }
      st = st.clearEnv(f->id);
      ProgramPoint post = point(ProgramPoint::Kind::PostStmt, f, s);
      auto [m, is_new] = g->getNode(post, st, p, n->block, n->elem + 1);
      if (!is_new)
        continue;
      NodeSet out = dispatch({m}, post, [&](Checker &c, CheckerContext &ctx) { c.checkPostStmt(s, ctx); });
      enqueue(finishStmt(out, post));
    }
  }

  void processDtor(ExplodedNode *n, const LocationContext *f, const cfg::CfgElement &el) {
    const MemRegion *reg = g->regions.var(el.var, f->id);
    ProgramPoint pp = point(ProgramPoint::Kind::PostImplicitCall, f, nullptr);
    pp.var = el.var;
    pp.loc = el.trigger_loc;
    auto [m, is_new] = g->getNode(pp, n->state.unbind(reg), n, n->block, n->elem + 1);
    if (!is_new)
      return;
    NodeSet out = dispatch({m}, pp, [&](Checker &c, CheckerContext &ctx) {
      c.checkPostImplicitDtor(el.var, reg, ctx);
    });
    enqueue(finishStmt(out, pp));
  }

  void processElement(ExplodedNode *n, const LocationContext *f, const cfg::CfgElement &el) {
    if (el.kind == cfg::CfgElement::Kind::ImplicitDtor) {
      processDtor(n, f, el);
      return;
    }
    const Node *s = el.stmt;
    switch (s->kind) {
    case NodeKind::VarDecl:
    case NodeKind::ExprStmt:
    case NodeKind::ReturnStmt:
    case NodeKind::DeleteStmt:
      processMarker(n, f, s);
      return;
    case NodeKind::Call:
      processCall(n, f, s);
      return;
    case NodeKind::MethodCall:
      processLibraryCall(n, f, s);
      return;
    case NodeKind::Assign:
      if (s->child(0)->type && s->child(0)->type->isString()) {
        processLibraryCall(n, f, s);
        return;
      }
      processExpr(n, f, s);
      return;
    default:
      processExpr(n, f, s);
    }
  }

  void edge(ExplodedNode *n, const LocationContext *f, int from, int to, ProgramState st,
            bool back_edge, bool full, const Node *cond_owner) {
    if (back_edge) {
      int c = st.loopCount(f->id, to);
      if (c >= opts.unroll)
        return;
      st = st.setLoopCount(f->id, to, c + 1);
    }
    if (full)
      st = st.clearEnv(f->id);
    ProgramPoint pp = point(ProgramPoint::Kind::BlockEdge, f, cond_owner);
    pp.from = from;
    pp.to = to;
    auto [m, is_new] = g->getNode(pp, st, n, to, 0);
    if (!is_new)
      return;
    enqueue(full ? finishStmt({m}, pp) : NodeSet{m});
  }

  void processTerminator(ExplodedNode *n, const LocationContext *f, const cfg::BasicBlock &b) {
    const cfg::Terminator &t = b.term;
    switch (t.kind) {
    case cfg::Terminator::Kind::None:
      return;
    case cfg::Terminator::Kind::Jump:
    case cfg::Terminator::Kind::Return:
      edge(n, f, b.id, t.target, n->state, t.back_edge, false, nullptr);
      return;
    case cfg::Terminator::Kind::Branch: {
      SVal v = rvalue(n->state, f, t.cond);
      for (bool truth : {true, false}) {
        auto st = assume(n->state, v, truth);
        if (!st)
          continue;
        edge(n, f, b.id, truth ? t.true_target : t.false_target, *st, false,
             t.full_expression, t.stmt);
      }
      return;
    }
    }
  }

  ProgramState popFrame(ProgramState st, const LocationContext *f) {
    for (const auto &[r, v] : ProgramState(st).store()) {
      const MemRegion *b = r->base();
      if (b->kind == MemRegion::Kind::Var && b->frame == f->id)
        st = st.unbind(r);
    }
    return st.clearEnv(f->id).clearFrame(f->id);
  }

  void endFunction(ExplodedNode *n, const LocationContext *f) {
    auto ri = n->state.returnValue(f->id);
    ProgramPoint pp = point(ProgramPoint::Kind::CallExit, f, f->fn);
    pp.tag = "";
    NodeSet out = dispatch({n}, pp, [&](Checker &c, CheckerContext &ctx) {
      c.checkEndFunction(ri ? &*ri : nullptr, ctx);
    });
    if (!f->parent)
      return;
    const LocationContext *caller = f->parent;
    for (ExplodedNode *m : out) {
      SVal ret = ri ? ri->value : SVal::unknown();
      if (f->call_site->type)
        ret = convert(ret, *f->call_site->type);
      ProgramState st = popFrame(m->state, f).bindEnv(caller->id, f->call_site, ret);
      ProgramPoint px = point(ProgramPoint::Kind::CallExit, caller, f->call_site);
      auto [x, is_new] = g->getNode(px, st, m, f->call_block, f->call_elem);
      if (!is_new)
        continue;
      for (ExplodedNode *y : finishStmt({x}, px))
        postCall(y, y->state, caller, f->call_site, f->call_block, f->call_elem);
    }
  }

  void process(ExplodedNode *n) {
    const LocationContext *f = n->point.frame;
    const cfg::Cfg &c = *f->cfg;
    if (n->block == c.exit) {
      endFunction(n, f);
      return;
    }
    const cfg::BasicBlock &b = c.blocks[n->block];
    if (n->elem < static_cast<int>(b.elements.size()))
      processElement(n, f, b.elements[n->elem]);
    else
      processTerminator(n, f, b);
  }

  void analyzeTop(const Node *fn) {
    auto graph = std::make_unique<ExplodedGraph>(fn, opts.node_budget);
    g = graph.get();
    const LocationContext *f0 = frameFor(nullptr, nullptr, fn, -1, -1);
    ProgramState st;
    bindParams(st, f0, nullptr);
    auto [root, is_new] = g->getNode(point(ProgramPoint::Kind::CallEnter, f0, fn), st, nullptr,
                                     f0->cfg->entry, 0);
    (void)is_new;
    worklist.clear();
    if (root)
      worklist.push_back(root);
    while (!worklist.empty()) {
      ExplodedNode *n = worklist.front();
      worklist.pop_front();
      process(n);
    }
    if (g->budgetExhausted())
      result->notes.push_back({fn->range.begin, "analysis of '" + fn->name +
                                                    "' stopped after " +
                                                    std::to_string(opts.node_budget) +
                                                    " nodes; remaining paths abandoned"});
    result->graphs.push_back(std::move(graph));
    g = nullptr;
  }

  std::vector<const Node *> topLevelOrder() {
    std::vector<const Node *> fns;
    for (const Node *d : unit.root()->children)
      if (d->kind == NodeKind::FunctionDecl && functionBody(d))
        fns.push_back(d);
    std::set<const Node *> called;
    for (const Node *fn : fns)
      AstContext::preorder(const_cast<Node *>(fn), [&](Node *x) {
        if (x->kind == NodeKind::Call && x->decl && x->decl != fn)
          called.insert(x->decl);
      });
    std::vector<const Node *> order;
    for (const Node *fn : fns)
      if (!called.count(fn))
        order.push_back(fn);
    for (const Node *fn : fns)
      if (called.count(fn))
        order.push_back(fn);
    return order;
  }
};

Engine::Engine(const Unit &unit, AnalysisOptions opts)
    : impl_(std::make_unique<Impl>(*this, unit, opts)) {
  if (!unit.ok())
    throw std::invalid_argument("cannot analyze a unit with frontend errors");
}

Engine::~Engine() = default;

Checker *Engine::addChecker(std::unique_ptr<Checker> c) {
  c->registerSlots(slots_);
  impl_->checkers.push_back(std::move(c));
  return impl_->checkers.back().get();
}

void Engine::report(BugReport r) {
  std::string key = r.checker + "|" + r.message + "|" + std::to_string(r.loc.offset);
  if (!impl_->report_keys.insert(key).second)
    return;
  impl_->result->reports.push_back(std::move(r));
}

SVal Engine::rvalueOf(const ProgramState &st, const LocationContext *f, const Node *e,
                      ExplodedGraph &g) const {
  ExplodedGraph *saved = impl_->g;
  impl_->g = &g;
  SVal v = impl_->rvalue(st, f, e);
  impl_->g = saved;
  return v;
}

AnalysisResult Engine::run() {
  AnalysisResult res;
  impl_->result = &res;
  impl_->inlined.clear();
  impl_->report_keys.clear();
  for (const Node *fn : impl_->topLevelOrder())
    if (!impl_->inlined.count(fn))
      impl_->analyzeTop(fn);
  impl_->result = nullptr;
  return res;
}

AnalysisResult Engine::runFunction(const std::string &name) {
  AnalysisResult res;
  impl_->result = &res;
  impl_->report_keys.clear();
  for (const Node *d : impl_->unit.root()->children)
    if (d->kind == NodeKind::FunctionDecl && d->name == name && functionBody(d))
      impl_->analyzeTop(d);
  impl_->result = nullptr;
  return res;
}

// ---- DOT ----

namespace {

std::string dotEscape(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    if (c == '\n') {
      out += "\\l";
      continue;
    }
    out += c;
  }
  return out;
}

} // namespace

std::string dumpGraph(const ExplodedGraph &g) {
  std::ostringstream os;
  os << "digraph \"ExplodedGraph " << dotEscape(g.function()->name) << "\" {\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  for (const ExplodedNode &n : g.nodes()) {
    std::string label = "#" + std::to_string(n.id) + " " + n.point.str();
    if (n.sink)
      label += " (sink)";
    label += "\n";
    std::string store = n.state.dumpStore(g.symbols);
    if (!store.empty())
      label += store + "\n";
    label += n.state.dumpConstraints(g.symbols);
    for (const auto &[h, d] : n.state.slots())
      label += d->dump(g.symbols) + "\n";
    os << "  n" << n.id << " [label=\"" << dotEscape(label) << "\"];\n";
  }
  for (const ExplodedNode &n : g.nodes())
    for (const ExplodedNode *s : n.succs)
      os << "  n" << n.id << " -> n" << s->id << ";\n";
  os << "}\n";
  return os.str();
}

} // namespace minisa::sym
