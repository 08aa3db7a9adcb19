#include "minisa/tidy/redundant_pointer.h"

#include <algorithm>

namespace minisa::tidy {

using namespace match;

namespace {

int rank(VarUsage::Kind k) {
  switch (k) {
  case VarUsage::Kind::Normal: return 0;
  case VarUsage::Kind::Dereference: return 1;
  case VarUsage::Kind::DerefInit: return 2;
  case VarUsage::Kind::Guard: return 2;
  }
  return 0;
}

bool isWs(char c) { return c == ' ' || c == '\t' || c == '\r'; }

} // namespace

const char *usageKindName(VarUsage::Kind k) {
  switch (k) {
  case VarUsage::Kind::Normal: return "Normal";
  case VarUsage::Kind::Dereference: return "Dereference";
  case VarUsage::Kind::DerefInit: return "DerefInit";
  case VarUsage::Kind::Guard: return "Guard";
  }
  return "?";
}

void UsageLedger::addUsage(const Node *var, const VarUsage &usage) {
  TrackedPointer &tp = vars[var->id];
  if (!tp.var) {
    tp.var = var;
    tp.init = varInit(var);
  }
  for (VarUsage &existing : tp.usages) {
    if (existing.decl_ref != usage.decl_ref)
      continue;
    if (rank(usage.kind) > rank(existing.kind))
      existing = usage;
    return;
  }
  auto pos = std::upper_bound(
      tp.usages.begin(), tp.usages.end(), usage,
      [](const VarUsage &a, const VarUsage &b) {
        return a.decl_ref->range.begin.offset < b.decl_ref->range.begin.offset;
      });
  tp.usages.insert(pos, usage);
}

const TrackedPointer *UsageLedger::find(const Node *var) const {
  auto it = vars.find(var->id);
  return it == vars.end() ? nullptr : &it->second;
}

PointerMatchers buildPointerMatchers() {
  PointerMatchers m{
      varDecl(hasType(pointerType()), hasInitializer(expr())),
      declRefExpr(),
      declRefExpr(),
      declRefExpr(),
      declRefExpr(),
      declRefExpr(),
  };
  m.var_usage = declRefExpr(to(m.pointer_var));
  Matcher derefd = m.var_usage.bind("DerefdVar");
  Matcher member_usage = memberExpr(hasDescendant(derefd));
  m.dereference =
      anyOf(member_usage.bind("DerefUsage"),
            methodCallExpr(has(anyOf(member_usage, ignoringParens(derefd))))
                .bind("DerefUsage"),
            unaryOperator(hasOperatorName("*"), hasDescendant(derefd))
                .bind("DerefUsage"));
  m.var_init_from_dereference =
      varDecl(hasInitializer(ignoringParens(m.dereference))).bind("InitedVar");
  m.flow_breaking =
      anyOf(returnStmt(), continueStmt(), breakStmt(),
            exprStmt(has(callExpr(callee(functionDecl(isNoReturn()))))))
          .bind("EarlyReturn");
  Matcher used = m.var_usage.bind("UsedVar");
  m.guard =
      ifStmt(hasCondition(allOf(anyOf(used, hasDescendant(used)),
                                unless(anyOf(m.dereference,
                                             hasDescendant(m.dereference))))),
             hasThen(anyOf(m.flow_breaking,
                           compoundStmt(statementCountIs(1),
                                        hasAnySubstatement(m.flow_breaking)))),
             unless(hasElse(stmt())))
          .bind("GuardStmt");
  return m;
}

void RedundantPointerCheck::registerMatchers(MatchFinder &finder) {
  PointerMatchers m = buildPointerMatchers();
  auto cb = [this](const MatchResult &r) { check(r); };
  finder.addMatcher(m.guard, cb);
  finder.addMatcher(m.var_init_from_dereference, cb);
  finder.addMatcher(m.dereference, cb);
  finder.addMatcher(m.var_usage.bind("PtrUsage"), cb);
}

void RedundantPointerCheck::check(const MatchResult &result) {
  ++callbacks_;
  if (const Node *g = getBound(result, "GuardStmt", NodeKind::IfStmt)) {
    const Node *dre = getBound(result, "UsedVar", NodeKind::DeclRef);
    const Node *flow = getBound(result, "EarlyReturn");
    if (!dre || !flow)
      throw std::logic_error("guard match without UsedVar/EarlyReturn");
    VarUsage u;
    u.kind = VarUsage::Kind::Guard;
    u.decl_ref = dre;
    u.guard_if = g;
    u.flow_stmt = flow;
    ledger_.addUsage(dre->decl, u);
    return;
  }
  if (const Node *v = getBound(result, "InitedVar", NodeKind::VarDecl)) {
    const Node *dre = getBound(result, "DerefdVar", NodeKind::DeclRef);
    const Node *deref = getBound(result, "DerefUsage");
    if (!dre || !deref)
      throw std::logic_error("init match without DerefdVar/DerefUsage");
    VarUsage u;
    u.kind = VarUsage::Kind::DerefInit;
    u.decl_ref = dre;
    u.deref_expr = deref;
    u.inited_var = v;
    ledger_.addUsage(dre->decl, u);
    return;
  }
  if (const Node *deref = getBound(result, "DerefUsage")) {
    const Node *dre = getBound(result, "DerefdVar", NodeKind::DeclRef);
    if (!dre)
      throw std::logic_error("dereference match without DerefdVar");
    VarUsage u;
    u.kind = VarUsage::Kind::Dereference;
    u.decl_ref = dre;
    u.deref_expr = deref;
    ledger_.addUsage(dre->decl, u);
    return;
  }
  if (const Node *dre = getBound(result, "PtrUsage", NodeKind::DeclRef)) {
    VarUsage u;
    u.kind = VarUsage::Kind::Normal;
    u.decl_ref = dre;
    ledger_.addUsage(dre->decl, u);
    return;
  }
  throw std::logic_error("unexpected match result in redundant-pointer check");
}

namespace {

/// The declaration plus its terminating ';'.
SourceRange declStatementRange(const Node *var, const Unit &unit) {
  SourceRange r = var->range;
  if (var->last_token < static_cast<int>(unit.tokens.size()) &&
      unit.tokens[var->last_token].isPunct(";"))
    r.end = unit.tokens[var->last_token].range.end;
  return r;
}

/// Widens a range to whole lines when nothing else shares those lines.
SourceRange wholeLines(SourceRange r, const SourceFile &file) {
  const std::string &t = file.text();
  int b = r.begin.offset, e = r.end.offset;
  int lb = b;
  while (lb > 0 && isWs(t[lb - 1]))
    --lb;
  if (lb > 0 && t[lb - 1] != '\n')
    return r;
  int le = e;
  while (le < static_cast<int>(t.size()) && isWs(t[le]))
    ++le;
  if (le < static_cast<int>(t.size()) && t[le] != '\n')
    return r;
  if (le < static_cast<int>(t.size()))
    ++le;
  return {file.locationAt(lb), file.locationAt(le)};
}

bool insideLoopBelow(const Node *n, const Node *stop) {
  for (const Node *p = n->parent; p && p != stop; p = p->parent)
    if (p->kind == NodeKind::WhileStmt)
      return true;
  return false;
}

int indexInParent(const Node *n) {
  if (!n->parent)
    return -1;
  const auto &cs = n->parent->children;
  auto it = std::find(cs.begin(), cs.end(), n);
  return it == cs.end() ? -1 : static_cast<int>(it - cs.begin());
}

bool needsParens(const Node *cond) {
  return cond->kind == NodeKind::Assign ||
         (cond->kind == NodeKind::BinaryOp && cond->op == ",");
}

} // namespace

void RedundantPointerCheck::diagnoseSingleUse(const TrackedPointer &tp,
                                              std::vector<Diagnostic> &out) {
  const Node *p = tp.var;
  const VarUsage &use = tp.usages.front();
  const Node *block = p->parent;
  if (!block || block->kind != NodeKind::Block || !tp.init)
    return;
  if (insideLoopBelow(use.decl_ref, block))
    return;
  const SourceFile &file = *unit_.file;
  std::string init = getSourceText(tp.init->range, file);

  int group = next_group_++;
  Diagnostic w = emitDiag(p->name_loc, "redundant pointer variable with only one usage",
                          {}, Severity::Warning, kRedundantPointerCheck);
  w.group = group;
  w.fixits.push_back(FixIt::removal(wholeLines(declStatementRange(p, unit_), file)));
  Diagnostic n = emitDiag(use.decl_ref->range.begin, "pointer usage location", {},
                          Severity::Note, kRedundantPointerCheck);
  n.fixits.push_back(FixIt::replacement(use.decl_ref->range, "(" + init + ")"));
  w.notes.push_back(std::move(n));
  out.push_back(std::move(w));
}

void RedundantPointerCheck::diagnoseGuarded(const TrackedPointer &tp,
                                            const VarUsage &g, const VarUsage &u,
                                            std::vector<Diagnostic> &out) {
  const Node *p = tp.var;
  const Node *ifs = g.guard_if;
  const Node *v = u.inited_var;
  const Node *block = p->parent;
  if (!tp.init || !block || block->kind != NodeKind::Block)
    return;
  if (ifs->parent != block || v->parent != block || ifInit(ifs))
    return;
  int ip = indexInParent(p), ig = indexInParent(ifs), iu = indexInParent(v);
  if (!(ip < ig && ig < iu))
    return;
  const TypeRef &vt = *v->type;
  if (vt.is_const || vt.indirections != 0 || vt.is_reference)
    return;

  const SourceFile &file = *unit_.file;
  const Node *cond = ifCond(ifs);
  std::string pi = getSourceText(tp.init->range, file);
  std::string phi = getSourceText(cond->range, file);
  std::string lambda = getSourceText(u.deref_expr->range, file);
  if (needsParens(cond))
    phi = "(" + phi + ")";

  int group = next_group_++;
  Diagnostic d1 = emitDiag(p->name_loc, "redundant pointer variable declared", {},
                           Severity::Warning, kRedundantPointerCheck);
  d1.group = group;
  d1.fixits.push_back(FixIt::replacement(declStatementRange(p, unit_),
                                         vt.spelling() + " " + v->name + ";"));
  Diagnostic d2 = emitDiag(v->name_loc,
                           "after swap, the initialisation is not needed at this location",
                           {}, Severity::Note, kRedundantPointerCheck);
  d2.fixits.push_back(FixIt::removal(wholeLines(declStatementRange(v, unit_), file)));
  d1.notes.push_back(std::move(d2));

  Diagnostic d3 = emitDiag(cond->range.begin,
                           "rewrite the conditional to C++17 initialise the pointer", {},
                           Severity::Warning, kRedundantPointerCheck);
  d3.group = group;
  d3.fixits.push_back(FixIt::replacement(
      cond->range, p->type->spelling() + " " + p->name + " = " + pi + "; " + phi +
                       " || ((" + v->name + " = " + lambda + "), false)"));
  out.push_back(std::move(d1));
  out.push_back(std::move(d3));
}

std::vector<Diagnostic> RedundantPointerCheck::onEndOfTranslationUnit() {
  std::vector<Diagnostic> out;
  for (const auto &[id, tp] : ledger_.vars) {
    size_t n = tp.usages.size();
    if (n == 0 || n >= 3)
      continue;
    bool written = std::any_of(tp.usages.begin(), tp.usages.end(),
                               [](const VarUsage &u) { return u.decl_ref->needs_lvalue; });
    if (written)
      continue;
    if (n == 1) {
      diagnoseSingleUse(tp, out);
      continue;
    }
    const VarUsage *g = nullptr, *u = nullptr;
    for (const VarUsage &x : tp.usages) {
      if (x.kind == VarUsage::Kind::Guard)
        g = &x;
      else if (x.kind == VarUsage::Kind::DerefInit)
        u = &x;
    }
    if (g && u && std_mode_ >= 17)
      diagnoseGuarded(tp, *g, *u, out);
  }
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic &a, const Diagnostic &b) {
    return a.location.offset < b.location.offset;
  });
  return out;
}

std::vector<Diagnostic> runRedundantPointerCheck(const Unit &unit, int std_mode) {
  RedundantPointerCheck check(unit, std_mode);
  MatchFinder finder;
  check.registerMatchers(finder);
  finder.run(unit.root());
  return check.onEndOfTranslationUnit();
}

} // namespace minisa::tidy
