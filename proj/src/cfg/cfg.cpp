#include "minisa/cfg/cfg.h"

#include <algorithm>
#include <functional>
#include <sstream>

namespace minisa::cfg {

std::vector<int> BasicBlock::successors() const {
  switch (term.kind) {
  case Terminator::Kind::Branch:
    if (term.true_target == term.false_target)
      return {term.true_target};
    return {term.true_target, term.false_target};
  case Terminator::Kind::Jump:
  case Terminator::Kind::Return:
    return {term.target};
  case Terminator::Kind::None:
    break;
  }
  return {};
}

std::vector<int> Cfg::predecessors(int block) const {
  std::vector<int> out;
  for (const BasicBlock &b : blocks)
    for (int s : b.successors())
      if (s == block)
        out.push_back(b.id);
  return out;
}

namespace {

SourceLocation lastCharOf(const Node *n) {
  SourceLocation l = n->range.end;
  if (l.offset > 0) {
    --l.offset;
    --l.column;
  }
  return l;
}

class Builder {
public:
  explicit Builder(const Node *fn) { cfg_.fn = fn; }

  Cfg build() {
    int entry = newBlock();
    exit_ = newBlock();
    cur_ = entry;
    if (const Node *body = functionBody(cfg_.fn))
      emitStmt(body);
    if (cur_ >= 0)
      jump(exit_);
    finish(entry);
    return std::move(cfg_);
  }

private:
  struct Scope {
    std::vector<const Node *> strings;
  };
  struct Loop {
    int header;
    int after;
    size_t scope_depth;
  };

  int newBlock() {
    BasicBlock b;
    b.id = static_cast<int>(cfg_.blocks.size());
    cfg_.blocks.push_back(b);
    return b.id;
  }

  BasicBlock &block(int id) { return cfg_.blocks[id]; }

  void ensureBlock() {
    if (cur_ < 0)
      cur_ = newBlock(); // unreachable; dropped later with a note
  }

  void add(const Node *stmt) {
    ensureBlock();
    CfgElement e;
    e.stmt = stmt;
    block(cur_).elements.push_back(e);
  }

  void jump(int target, bool back_edge = false) {
    if (cur_ < 0)
      return;
    Terminator &t = block(cur_).term;
    t.kind = Terminator::Kind::Jump;
    t.target = target;
    t.back_edge = back_edge;
    cur_ = -1;
  }

  void branch(const Node *cond, int t, int f, const Node *owner, bool full) {
    Terminator &term = block(cur_).term;
    term.kind = Terminator::Kind::Branch;
    term.cond = cond;
    term.true_target = t;
    term.false_target = f;
    term.stmt = owner;
    term.full_expression = full;
    cur_ = -1;
  }

  /// Destructor elements for scopes [from_depth, top), innermost first.
  void emitDtors(size_t from_depth, SourceLocation trigger) {
    if (cur_ < 0)
      return;
    for (size_t d = scopes_.size(); d > from_depth; --d) {
      const auto &vars = scopes_[d - 1].strings;
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        CfgElement e;
        e.kind = CfgElement::Kind::ImplicitDtor;
        e.var = *it;
        e.trigger_loc = trigger;
        block(cur_).elements.push_back(e);
      }
    }
  }

  void popScope(SourceLocation trigger) {
    emitDtors(scopes_.size() - 1, trigger);
    scopes_.pop_back();
  }

  void emitExpr(const Node *e) {
    ensureBlock();
    if (e->kind == NodeKind::BinaryOp && (e->op == "&&" || e->op == "||")) {
      emitExpr(e->child(0));
      int rhs = newBlock(), join = newBlock();
      if (e->op == "&&")
        branch(e->child(0), rhs, join, e, false);
      else
        branch(e->child(0), join, rhs, e, false);
      cur_ = rhs;
      emitExpr(e->child(1));
      jump(join);
      cur_ = join;
      add(e);
      return;
    }
    for (const Node *c : e->children)
      emitExpr(c);
    add(e);
  }

  void emitCond(const Node *e, int t, int f, const Node *owner) {
    ensureBlock();
    if (e->kind == NodeKind::Paren) {
      emitCond(e->child(0), t, f, owner);
      return;
    }
    if (e->kind == NodeKind::UnaryOp && e->op == "!") {
      emitCond(e->child(0), f, t, owner);
      return;
    }
    if (e->kind == NodeKind::BinaryOp && (e->op == "&&" || e->op == "||")) {
      int mid = newBlock();
      if (e->op == "&&")
        emitCond(e->child(0), mid, f, owner);
      else
        emitCond(e->child(0), t, mid, owner);
      cur_ = mid;
      emitCond(e->child(1), t, f, owner);
      return;
    }
    emitExpr(e);
    branch(e, t, f, owner, true);
  }

  void declare(const Node *var) {
    if (var->type && var->type->isString() && !var->type->is_reference)
      scopes_.back().strings.push_back(var);
  }

  void emitStmt(const Node *s) {
    switch (s->kind) {
    case NodeKind::Block: {
      scopes_.emplace_back();
      for (const Node *c : s->children)
        emitStmt(c);
      popScope(lastCharOf(s));
      return;
    }
    case NodeKind::VarDecl:
      if (const Node *init = varInit(s))
        emitExpr(init);
      add(s);
      declare(s);
      return;
    case NodeKind::ExprStmt:
    case NodeKind::DeleteStmt:
      emitExpr(s->child(0));
      add(s);
      return;
    case NodeKind::ReturnStmt:
      if (!s->children.empty())
        emitExpr(s->child(0));
      add(s);
      emitDtors(0, s->range.begin);
      block(cur_).term.kind = Terminator::Kind::Return;
      block(cur_).term.target = exit_;
      block(cur_).term.stmt = s;
      cur_ = -1;
      return;
    case NodeKind::IfStmt: {
      scopes_.emplace_back();
      if (const Node *init = ifInit(s))
        emitStmt(init);
      int then_b = newBlock();
      int else_b = s->has_else ? newBlock() : -1;
      int join = newBlock();
      emitCond(ifCond(s), then_b, else_b >= 0 ? else_b : join, s);
      cur_ = then_b;
      emitStmt(ifThen(s));
      jump(join);
      if (else_b >= 0) {
        cur_ = else_b;
        emitStmt(ifElse(s));
        jump(join);
      }
      cur_ = join;
      popScope(lastCharOf(s));
      return;
    }
    case NodeKind::WhileStmt: {
      ensureBlock();
      int header = newBlock(), body = newBlock(), after = newBlock();
      block(header).loop_header = true;
      jump(header);
      cur_ = header;
      emitCond(s->child(0), body, after, s);
      loops_.push_back({header, after, scopes_.size()});
      cur_ = body;
      emitStmt(s->child(1));
      jump(header, true);
      loops_.pop_back();
      cur_ = after;
      return;
    }
    case NodeKind::BreakStmt:
    case NodeKind::ContinueStmt: {
      ensureBlock();
      if (loops_.empty()) {
        cfg_.notes.push_back({s->range.begin, std::string("'") +
                                                  (s->kind == NodeKind::BreakStmt ? "break" : "continue") +
                                                  "' statement not in loop statement"});
        return;
      }
      const Loop &l = loops_.back();
      emitDtors(l.scope_depth, s->range.begin);
      if (s->kind == NodeKind::BreakStmt)
        jump(l.after);
      else
        jump(l.header, true);
      return;
    }
    default:
      return;
    }
  }

  void finish(int entry) {
    // Reverse post-order numbering over reachable blocks.
    std::vector<int> order;
    std::vector<char> seen(cfg_.blocks.size(), 0);
    std::function<void(int)> dfs = [&](int b) {
      seen[b] = 1;
      for (int s : cfg_.blocks[b].successors())
        if (!seen[s])
          dfs(s);
      order.push_back(b);
    };
    dfs(entry);
    std::reverse(order.begin(), order.end());
    if (!seen[exit_])
      order.push_back(exit_);
    else {
      order.erase(std::find(order.begin(), order.end(), exit_));
      order.push_back(exit_);
    }
    for (size_t b = 0; b < cfg_.blocks.size(); ++b) {
      if (seen[b] || static_cast<int>(b) == exit_)
        continue;
      for (const CfgElement &e : cfg_.blocks[b].elements)
        if (e.kind == CfgElement::Kind::Stmt) {
          cfg_.notes.push_back({e.stmt->range.begin, "unreachable code"});
          break;
        }
    }
    std::vector<int> remap(cfg_.blocks.size(), -1);
    for (size_t i = 0; i < order.size(); ++i)
      remap[order[i]] = static_cast<int>(i);
    std::vector<BasicBlock> blocks;
    for (int old : order) {
      BasicBlock b = cfg_.blocks[old];
      b.id = remap[old];
      Terminator &t = b.term;
      if (t.true_target >= 0)
        t.true_target = remap[t.true_target];
      if (t.false_target >= 0)
        t.false_target = remap[t.false_target];
      if (t.target >= 0)
        t.target = remap[t.target];
      blocks.push_back(std::move(b));
    }
    cfg_.blocks = std::move(blocks);
    cfg_.entry = remap[entry];
    cfg_.exit = remap[exit_];
  }

  Cfg cfg_;
  int cur_ = -1;
  int exit_ = -1;
  std::vector<Scope> scopes_;
  std::vector<Loop> loops_;
};

} // namespace

Cfg buildCfg(const Node *fn) { return Builder(fn).build(); }

std::string describeElement(const CfgElement &e) {
  std::ostringstream os;
  if (e.kind == CfgElement::Kind::ImplicitDtor) {
    os << "~string() " << e.var->name;
    return os.str();
  }
  const Node *n = e.stmt;
  os << nodeKindName(n->kind);
  if (!n->name.empty())
    os << " " << n->name;
  if (!n->op.empty())
    os << " '" << n->op << "'";
  if (n->kind == NodeKind::IntLit)
    os << " " << n->int_value;
  os << " <" << n->range.begin.line << ":" << n->range.begin.column << ">";
  return os.str();
}

std::string dumpCfg(const Cfg &cfg) {
  std::ostringstream os;
  os << "CFG " << (cfg.fn ? cfg.fn->name : "?") << " (entry B" << cfg.entry
     << ", exit B" << cfg.exit << ")\n";
  for (const BasicBlock &b : cfg.blocks) {
    os << " [B" << b.id << "]";
    if (b.id == cfg.entry)
      os << " (ENTRY)";
    if (b.id == cfg.exit)
      os << " (EXIT)";
    if (b.loop_header)
      os << " (LOOP)";
    os << "\n";
    for (size_t i = 0; i < b.elements.size(); ++i)
      os << "   " << i + 1 << ": " << describeElement(b.elements[i]) << "\n";
    const Terminator &t = b.term;
    switch (t.kind) {
    case Terminator::Kind::Branch:
      os << "   T: branch " << describeElement({CfgElement::Kind::Stmt, t.cond, nullptr, {}})
         << " ? B" << t.true_target << " : B" << t.false_target << "\n";
      break;
    case Terminator::Kind::Jump:
      os << "   T: jump B" << t.target << (t.back_edge ? " (back edge)" : "") << "\n";
      break;
    case Terminator::Kind::Return:
      os << "   T: return B" << t.target << "\n";
      break;
    case Terminator::Kind::None:
      break;
    }
    auto preds = cfg.predecessors(b.id);
    if (!preds.empty()) {
      os << "   Preds:";
      for (int p : preds)
        os << " B" << p;
      os << "\n";
    }
  }
  return os.str();
}

} // namespace minisa::cfg
