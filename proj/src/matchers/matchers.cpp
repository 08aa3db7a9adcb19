#include "minisa/matchers/matchers.h"

#include <functional>

namespace minisa::match {

namespace {

bool childMatch(const Node *n, const Matcher &m, BoundNodes &out) {
  return n && m.matches(n, out);
}

bool descendantMatch(const Node *n, const Matcher &m, BoundNodes &out) {
  for (const Node *c : n->children) {
    if (m.matches(c, out))
      return true;
    if (descendantMatch(c, m, out))
      return true;
  }
  return false;
}

KindSet intersectAll(const std::vector<Matcher> &ms, KindSet start) {
  for (const auto &m : ms)
    start &= m.domain();
  return start;
}

} // namespace

Matcher::Matcher(std::string kind, KindSet domain, Fn fn)
    : impl_(std::make_shared<Impl>(Impl{std::move(kind), domain, std::move(fn)})) {}

bool Matcher::matches(const Node *n, BoundNodes &out) const {
  if (!inDomain(n))
    return false;
  BoundNodes local;
  if (!impl_->fn(n, local))
    return false;
  for (auto &[k, v] : local)
    out[k] = v;
  return true;
}

Matcher Matcher::bind(std::string label) const {
  Matcher inner = *this;
  return Matcher(kind(), domain(),
                 [inner, label](const Node *n, BoundNodes &out) {
                   if (!inner.matches(n, out))
                     return false;
                   out[label] = n;
                   return true;
                 });
}

KindSet allKinds() {
  KindSet s;
  s.set();
  return s;
}

KindSet kindsOf(std::initializer_list<NodeKind> kinds) {
  KindSet s;
  for (NodeKind k : kinds)
    s.set(static_cast<int>(k));
  return s;
}

KindSet exprKinds() {
  KindSet s;
  for (int i = 0; i < kNodeKindCount; ++i)
    if (isExprKind(static_cast<NodeKind>(i)))
      s.set(i);
  return s;
}

KindSet stmtKinds() {
  KindSet s = exprKinds();
  for (int i = 0; i < kNodeKindCount; ++i)
    if (isStmtKind(static_cast<NodeKind>(i)))
      s.set(i);
  return s;
}

KindSet declKinds() {
  KindSet s;
  for (int i = 0; i < kNodeKindCount; ++i)
    if (isDeclKind(static_cast<NodeKind>(i)))
      s.set(i);
  return s;
}

namespace detail {

Matcher nodeMatcher(const char *name, KindSet kinds, std::vector<Matcher> inner) {
  return Matcher(name, intersectAll(inner, kinds),
                 [inner](const Node *n, BoundNodes &out) {
                   BoundNodes acc;
                   for (const auto &m : inner)
                     if (!m.matches(n, acc))
                       return false;
                   for (auto &[k, v] : acc)
                     out[k] = v;
                   return true;
                 });
}

} // namespace detail

#define MINISA_DEFINE_NODE_MATCHER(fn, kinds)                                  \
  Matcher fn##Impl(std::vector<Matcher> inner) {                               \
    return detail::nodeMatcher(#fn, kinds, std::move(inner));                  \
  }

using K = NodeKind;
MINISA_DEFINE_NODE_MATCHER(stmt, stmtKinds())
MINISA_DEFINE_NODE_MATCHER(expr, exprKinds())
MINISA_DEFINE_NODE_MATCHER(varDecl, kindsOf({K::VarDecl}))
MINISA_DEFINE_NODE_MATCHER(declRefExpr, kindsOf({K::DeclRef}))
MINISA_DEFINE_NODE_MATCHER(memberExpr, kindsOf({K::FieldAccess}))
MINISA_DEFINE_NODE_MATCHER(methodCallExpr, kindsOf({K::MethodCall}))
MINISA_DEFINE_NODE_MATCHER(unaryOperator, kindsOf({K::UnaryOp}))
MINISA_DEFINE_NODE_MATCHER(binaryOperator, kindsOf({K::BinaryOp, K::Assign}))
MINISA_DEFINE_NODE_MATCHER(callExpr, kindsOf({K::Call}))
MINISA_DEFINE_NODE_MATCHER(functionDecl, kindsOf({K::FunctionDecl, K::ExternDecl}))
MINISA_DEFINE_NODE_MATCHER(ifStmt, kindsOf({K::IfStmt}))
MINISA_DEFINE_NODE_MATCHER(returnStmt, kindsOf({K::ReturnStmt}))
MINISA_DEFINE_NODE_MATCHER(breakStmt, kindsOf({K::BreakStmt}))
MINISA_DEFINE_NODE_MATCHER(continueStmt, kindsOf({K::ContinueStmt}))
MINISA_DEFINE_NODE_MATCHER(compoundStmt, kindsOf({K::Block}))
MINISA_DEFINE_NODE_MATCHER(newExpr, kindsOf({K::NewExpr}))
MINISA_DEFINE_NODE_MATCHER(deleteStmt, kindsOf({K::DeleteStmt}))
MINISA_DEFINE_NODE_MATCHER(exprStmt, kindsOf({K::ExprStmt}))
#undef MINISA_DEFINE_NODE_MATCHER

Matcher hasName(std::string name) {
  return Matcher("hasName", declKinds(),
                 [name](const Node *n, BoundNodes &) { return n->name == name; });
}

Matcher hasType(TypeMatcher t) {
  KindSet dom = exprKinds() |
                kindsOf({K::VarDecl, K::ParamDecl, K::FieldDecl});
  return Matcher("hasType", dom, [t](const Node *n, BoundNodes &) {
    return n->type && t.matches(*n->type);
  });
}

Matcher hasInitializer(Matcher m) {
  return Matcher("hasInitializer", kindsOf({K::VarDecl}),
                 [m](const Node *n, BoundNodes &out) {
                   return childMatch(varInit(n), m, out);
                 });
}

Matcher hasOperatorName(std::string op) {
  return Matcher("hasOperatorName", kindsOf({K::UnaryOp, K::BinaryOp, K::Assign}),
                 [op](const Node *n, BoundNodes &) { return n->op == op; });
}

Matcher hasCondition(Matcher m) {
  return Matcher("hasCondition", kindsOf({K::IfStmt, K::WhileStmt}),
                 [m](const Node *n, BoundNodes &out) {
                   const Node *c = n->kind == K::IfStmt ? ifCond(n) : n->child(0);
                   return childMatch(c, m, out);
                 });
}

Matcher hasThen(Matcher m) {
  return Matcher("hasThen", kindsOf({K::IfStmt}),
                 [m](const Node *n, BoundNodes &out) {
                   return childMatch(ifThen(n), m, out);
                 });
}

Matcher hasElse(Matcher m) {
  return Matcher("hasElse", kindsOf({K::IfStmt}),
                 [m](const Node *n, BoundNodes &out) {
                   return childMatch(ifElse(n), m, out);
                 });
}

Matcher argumentCountIs(int count) {
  return Matcher("argumentCountIs", kindsOf({K::Call, K::MethodCall}),
                 [count](const Node *n, BoundNodes &) {
                   return static_cast<int>(callArgs(n).size()) == count;
                 });
}

Matcher hasArgument(int index, Matcher m) {
  return Matcher("hasArgument", kindsOf({K::Call, K::MethodCall}),
                 [index, m](const Node *n, BoundNodes &out) {
                   auto args = callArgs(n);
                   if (index < 0 || index >= static_cast<int>(args.size()))
                     return false;
                   return m.matches(args[index], out);
                 });
}

Matcher statementCountIs(int count) {
  return Matcher("statementCountIs", kindsOf({K::Block}),
                 [count](const Node *n, BoundNodes &) {
                   return n->numChildren() == count;
                 });
}

Matcher hasAnySubstatement(Matcher m) {
  return Matcher("hasAnySubstatement", kindsOf({K::Block}),
                 [m](const Node *n, BoundNodes &out) {
                   for (const Node *c : n->children)
                     if (m.matches(c, out))
                       return true;
                   return false;
                 });
}

Matcher isNoReturn() {
  return Matcher("isNoReturn", kindsOf({K::FunctionDecl, K::ExternDecl}),
                 [](const Node *n, BoundNodes &) { return n->is_noreturn; });
}

Matcher to(Matcher m) {
  return Matcher("to", kindsOf({K::DeclRef}), [m](const Node *n, BoundNodes &out) {
    return childMatch(n->decl, m, out);
  });
}

Matcher callee(Matcher m) {
  return Matcher("callee", kindsOf({K::Call}), [m](const Node *n, BoundNodes &out) {
    return childMatch(n->decl, m, out);
  });
}

Matcher ignoringParens(Matcher m) {
  return Matcher("ignoringParens", exprKinds(), [m](const Node *n, BoundNodes &out) {
    return m.matches(::minisa::ignoringParens(n), out);
  });
}

TypeMatcher pointerType() {
  return TypeMatcher("pointerType", [](const TypeRef &t) { return t.isPointer(); });
}

TypeMatcher stringType() {
  return TypeMatcher("stringType", [](const TypeRef &t) { return t.isString(); });
}

TypeMatcher namedType(std::string name) {
  return TypeMatcher("namedType", [name](const TypeRef &t) {
    return t.isStruct() && t.struct_name == name;
  });
}

Matcher anyOfImpl(std::vector<Matcher> ms) {
  KindSet dom;
  for (const auto &m : ms)
    dom |= m.domain();
  return Matcher("anyOf", dom, [ms](const Node *n, BoundNodes &out) {
    for (const auto &m : ms)
      if (m.matches(n, out))
        return true;
    return false;
  });
}

Matcher allOfImpl(std::vector<Matcher> ms) {
  return detail::nodeMatcher("allOf", allKinds(), std::move(ms));
}

Matcher unless(Matcher m) {
  return Matcher("unless", m.domain(), [m](const Node *n, BoundNodes &) {
    BoundNodes scratch;
    return !m.matches(n, scratch);
  });
}

Matcher has(Matcher m) {
  return Matcher("has", allKinds(), [m](const Node *n, BoundNodes &out) {
    for (const Node *c : n->children)
      if (m.matches(c, out))
        return true;
    return false;
  });
}

Matcher hasDescendant(Matcher m) {
  return Matcher("hasDescendant", allKinds(), [m](const Node *n, BoundNodes &out) {
    return descendantMatch(n, m, out);
  });
}

Matcher hasParent(Matcher m) {
  return Matcher("hasParent", allKinds(), [m](const Node *n, BoundNodes &out) {
    return childMatch(n->parent, m, out);
  });
}

std::vector<MatchResult> matchAll(const Matcher &m, const Node *root) {
  std::vector<MatchResult> out;
  if (!root)
    return out;
  std::function<void(const Node *)> visit = [&](const Node *n) {
    BoundNodes b;
    if (m.matches(n, b))
      out.push_back({n, std::move(b)});
    for (const Node *c : n->children)
      visit(c);
  };
  visit(root);
  return out;
}

const Node *getBound(const MatchResult &r, const std::string &label,
                     NodeKind expected) {
  const Node *n = getBound(r, label);
  return n && n->kind == expected ? n : nullptr;
}

const Node *getBound(const MatchResult &r, const std::string &label) {
  auto it = r.bound.find(label);
  return it == r.bound.end() ? nullptr : it->second;
}

void MatchFinder::addMatcher(Matcher m, Callback cb) {
  entries_.emplace_back(std::move(m), std::move(cb));
}

void MatchFinder::run(const Node *root) const {
  if (!root)
    return;
  std::function<void(const Node *)> visit = [&](const Node *n) {
    for (const auto &[m, cb] : entries_) {
      BoundNodes b;
      if (m.matches(n, b))
        cb(MatchResult{n, std::move(b)});
    }
    for (const Node *c : n->children)
      visit(c);
  };
  visit(root);
}

// ---- dynamic construction ----

namespace {

const Matcher &asMatcher(const MatcherArg &a, std::string_view ctor) {
  if (auto *m = std::get_if<Matcher>(&a))
    return *m;
  throw MatcherConfigError(std::string(ctor) + ": expected a matcher argument");
}

std::string asString(const MatcherArg &a, std::string_view ctor) {
  if (auto *s = std::get_if<std::string>(&a))
    return *s;
  throw MatcherConfigError(std::string(ctor) + ": expected a string argument");
}

int asInt(const MatcherArg &a, std::string_view ctor) {
  if (auto *i = std::get_if<std::int64_t>(&a))
    return static_cast<int>(*i);
  throw MatcherConfigError(std::string(ctor) + ": expected an integer argument");
}

void arity(std::string_view ctor, const std::vector<MatcherArg> &args, size_t n) {
  if (args.size() != n)
    throw MatcherConfigError(std::string(ctor) + ": expected " +
                             std::to_string(n) + " argument(s), got " +
                             std::to_string(args.size()));
}

std::vector<Matcher> allMatchers(std::string_view ctor,
                                 const std::vector<MatcherArg> &args) {
  std::vector<Matcher> out;
  for (const auto &a : args)
    out.push_back(asMatcher(a, ctor));
  return out;
}

} // namespace

Matcher buildMatcher(std::string_view ctor, const std::vector<MatcherArg> &args) {
  using NodeFactory = Matcher (*)(std::vector<Matcher>);
  static const std::map<std::string_view, NodeFactory> node_factories = {
      {"stmt", stmtImpl},
      {"expr", exprImpl},
      {"varDecl", varDeclImpl},
      {"declRefExpr", declRefExprImpl},
      {"memberExpr", memberExprImpl},
      {"methodCallExpr", methodCallExprImpl},
      {"unaryOperator", unaryOperatorImpl},
      {"binaryOperator", binaryOperatorImpl},
      {"callExpr", callExprImpl},
      {"functionDecl", functionDeclImpl},
      {"ifStmt", ifStmtImpl},
      {"returnStmt", returnStmtImpl},
      {"breakStmt", breakStmtImpl},
      {"continueStmt", continueStmtImpl},
      {"compoundStmt", compoundStmtImpl},
      {"newExpr", newExprImpl},
      {"deleteStmt", deleteStmtImpl},
      {"exprStmt", exprStmtImpl},
  };
  if (auto it = node_factories.find(ctor); it != node_factories.end())
    return it->second(allMatchers(ctor, args));

  if (ctor == "anyOf" || ctor == "allOf") {
    if (args.empty())
      throw MatcherConfigError(std::string(ctor) + ": expected at least 1 argument");
    auto ms = allMatchers(ctor, args);
    return ctor == "anyOf" ? anyOfImpl(ms) : allOfImpl(ms);
  }

  using Unary = Matcher (*)(Matcher);
  static const std::map<std::string_view, Unary> unary = {
      {"unless", unless},
      {"has", has},
      {"hasDescendant", hasDescendant},
      {"hasParent", hasParent},
      {"hasInitializer", hasInitializer},
      {"hasCondition", hasCondition},
      {"hasThen", hasThen},
      {"hasElse", hasElse},
      {"hasAnySubstatement", hasAnySubstatement},
      {"to", to},
      {"callee", callee},
      {"ignoringParens", ignoringParens},
  };
  if (auto it = unary.find(ctor); it != unary.end()) {
    arity(ctor, args, 1);
    return it->second(asMatcher(args[0], ctor));
  }
  if (ctor == "hasName") {
    arity(ctor, args, 1);
    return hasName(asString(args[0], ctor));
  }
  if (ctor == "hasOperatorName") {
    arity(ctor, args, 1);
    return hasOperatorName(asString(args[0], ctor));
  }
  if (ctor == "hasType") {
    arity(ctor, args, 1);
    if (auto *t = std::get_if<TypeMatcher>(&args[0]))
      return hasType(*t);
    throw MatcherConfigError("hasType: expected a type matcher argument");
  }
  if (ctor == "argumentCountIs") {
    arity(ctor, args, 1);
    return argumentCountIs(asInt(args[0], ctor));
  }
  if (ctor == "statementCountIs") {
    arity(ctor, args, 1);
    return statementCountIs(asInt(args[0], ctor));
  }
  if (ctor == "hasArgument") {
    arity(ctor, args, 2);
    return hasArgument(asInt(args[0], ctor), asMatcher(args[1], ctor));
  }
  if (ctor == "isNoReturn") {
    arity(ctor, args, 0);
    return isNoReturn();
  }
  throw MatcherConfigError("unknown matcher '" + std::string(ctor) + "'");
}

} // namespace minisa::match
