#pragma once

#include "minisa/frontend/ast.h"

#include <bitset>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace minisa::match {

using KindSet = std::bitset<kNodeKindCount>;
using BoundNodes = std::map<std::string, const Node *>;

struct MatchResult {
  const Node *root = nullptr;
  BoundNodes bound;
};

struct MatcherConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Predicate over TypeRef used by hasType().
class TypeMatcher {
public:
  TypeMatcher(std::string name, std::function<bool(const TypeRef &)> pred)
      : name_(std::move(name)), pred_(std::move(pred)) {}
  bool matches(const TypeRef &t) const { return pred_(t); }
  const std::string &name() const { return name_; }

private:
  std::string name_;
  std::function<bool(const TypeRef &)> pred_;
};

class Matcher {
public:
  using Fn = std::function<bool(const Node *, BoundNodes &)>;

  Matcher(std::string kind, KindSet domain, Fn fn);

  /// Returns a matcher that additionally binds the matched node to `label`.
  Matcher bind(std::string label) const;

  const std::string &kind() const { return impl_->kind; }
  const KindSet &domain() const { return impl_->domain; }
  bool inDomain(const Node *n) const { return impl_->domain.test(static_cast<int>(n->kind)); }

  /// Tries to match `n`; on success the produced bindings are merged into
  /// `out`, on failure `out` is left untouched.
  bool matches(const Node *n, BoundNodes &out) const;

private:
  struct Impl {
    std::string kind;
    KindSet domain;
    Fn fn;
  };
  std::shared_ptr<const Impl> impl_;
};

using MatcherArg = std::variant<Matcher, TypeMatcher, std::string, std::int64_t>;

/// Generic constructor by name; throws MatcherConfigError for unknown names
/// or wrong arity/argument kinds.
Matcher buildMatcher(std::string_view ctor, const std::vector<MatcherArg> &args = {});

/// All matches below (and including) `root`, in pre-order, one per node.
std::vector<MatchResult> matchAll(const Matcher &m, const Node *root);

/// The node bound to `label` if it exists and has kind `expected`.
const Node *getBound(const MatchResult &r, const std::string &label,
                     NodeKind expected);
const Node *getBound(const MatchResult &r, const std::string &label);

KindSet allKinds();
KindSet kindsOf(std::initializer_list<NodeKind> kinds);
KindSet exprKinds();
KindSet stmtKinds(); // statements and expressions
KindSet declKinds();

// ---- node matchers ----
namespace detail {
Matcher nodeMatcher(const char *name, KindSet kinds, std::vector<Matcher> inner);
}

#define MINISA_NODE_MATCHER(fn)                                                \
  Matcher fn##Impl(std::vector<Matcher> inner);                                \
  template <typename... Ms> Matcher fn(Ms... ms) {                             \
    return fn##Impl(std::vector<Matcher>{ms...});                              \
  }

MINISA_NODE_MATCHER(stmt)
MINISA_NODE_MATCHER(expr)
MINISA_NODE_MATCHER(varDecl)
MINISA_NODE_MATCHER(declRefExpr)
MINISA_NODE_MATCHER(memberExpr)
MINISA_NODE_MATCHER(methodCallExpr)
MINISA_NODE_MATCHER(unaryOperator)
MINISA_NODE_MATCHER(binaryOperator)
MINISA_NODE_MATCHER(callExpr)
MINISA_NODE_MATCHER(functionDecl)
MINISA_NODE_MATCHER(ifStmt)
MINISA_NODE_MATCHER(returnStmt)
MINISA_NODE_MATCHER(breakStmt)
MINISA_NODE_MATCHER(continueStmt)
MINISA_NODE_MATCHER(compoundStmt)
MINISA_NODE_MATCHER(newExpr)
MINISA_NODE_MATCHER(deleteStmt)
MINISA_NODE_MATCHER(exprStmt)

#undef MINISA_NODE_MATCHER

// ---- narrowing ----
Matcher hasName(std::string name);
Matcher hasType(TypeMatcher t);
Matcher hasInitializer(Matcher m);
Matcher hasOperatorName(std::string op);
Matcher hasCondition(Matcher m);
Matcher hasThen(Matcher m);
Matcher hasElse(Matcher m);
Matcher argumentCountIs(int n);
Matcher hasArgument(int index, Matcher m);
Matcher statementCountIs(int n);
Matcher hasAnySubstatement(Matcher m);
Matcher isNoReturn();
Matcher to(Matcher m);
Matcher callee(Matcher m);
Matcher ignoringParens(Matcher m);

TypeMatcher pointerType();
TypeMatcher stringType();
TypeMatcher namedType(std::string name);

// ---- combinators ----
Matcher anyOfImpl(std::vector<Matcher> ms);
Matcher allOfImpl(std::vector<Matcher> ms);
template <typename... Ms> Matcher anyOf(Ms... ms) {
  return anyOfImpl(std::vector<Matcher>{ms...});
}
template <typename... Ms> Matcher allOf(Ms... ms) {
  return allOfImpl(std::vector<Matcher>{ms...});
}
Matcher unless(Matcher m);

// ---- traversal ----
Matcher has(Matcher m);
Matcher hasDescendant(Matcher m);
Matcher hasParent(Matcher m);

/// Runs several matchers over one tree; for each node in pre-order, each
/// registered matcher is tried in registration order.
class MatchFinder {
public:
  using Callback = std::function<void(const MatchResult &)>;

  void addMatcher(Matcher m, Callback cb);
  void run(const Node *root) const;

private:
  std::vector<std::pair<Matcher, Callback>> entries_;
};

} // namespace minisa::match
