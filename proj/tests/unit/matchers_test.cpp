#include "minisa/frontend/frontend.h"
#include "minisa/matchers/matchers.h"

#include "matcher_oracle.h"

#include <gtest/gtest.h>

using namespace minisa;
using namespace minisa::match;

namespace {

std::unique_ptr<Unit> load(const std::string &src) {
  auto u = loadUnit("m.mc", src);
  EXPECT_TRUE(u->ok()) << formatFrontendErrors(*u);
  return u;
}

} // namespace

TEST(Matchers, VarDeclHasName) {
  auto u = load("void f(){ int x; int y; }");
  auto r = matchAll(varDecl(hasName("x")), u->root());
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].root->name, "x");
}

TEST(Matchers, AllOfSingleIsIdentity) {
  auto u = load("void f(int a){ int x = a; if (x) return; x = a + 1; }");
  auto m = varDecl();
  auto a = matchAll(m, u->root());
  auto b = matchAll(allOf(m), u->root());
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(a[i].root, b[i].root);
}

TEST(Matchers, AnyOfUnion) {
  auto u = load("void f(int a){ int x = a; if (x) return; }");
  auto r = matchAll(anyOf(varDecl(), ifStmt()), u->root());
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].root->kind, NodeKind::VarDecl);
  EXPECT_EQ(r[1].root->kind, NodeKind::IfStmt);
}

TEST(Matchers, UnlessStmtIsEmptyOnStatements) {
  auto u = load("int f(int a){ int x = a; if (x) return 1; return x + 2; }");
  EXPECT_TRUE(matchAll(unless(stmt()), u->root()).empty());
}

TEST(Matchers, HasDescendantAgreesWithNaiveCount) {
  auto u = load("int f(int a){ int x = a; int y = x; return a; }");
  auto r = matchAll(hasDescendant(declRefExpr()), u->root());
  size_t naive = 0;
  AstContext::preorder(u->root(), [&](Node *n) {
    bool found = false;
    for (Node *c : n->children)
      AstContext::preorder(c, [&](Node *d) {
        found = found || d->kind == NodeKind::DeclRef;
      });
    naive += found;
  });
  EXPECT_EQ(r.size(), naive);
}

TEST(Matchers, GetBound) {
  auto u = load("struct S{int v;}; extern S* g();\n"
                "void f(){ S* p = g(); if (!p) return; int v = p->v; }");
  auto guard = ifStmt(hasCondition(hasDescendant(
                          declRefExpr().bind("DerefdVar"))))
                   .bind("GuardStmt");
  auto r = matchAll(guard, u->root());
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NE(getBound(r[0], "GuardStmt", NodeKind::IfStmt), nullptr);
  EXPECT_EQ(getBound(r[0], "missing", NodeKind::VarDecl), nullptr);
  EXPECT_EQ(getBound(r[0], "DerefdVar", NodeKind::IfStmt), nullptr);
  EXPECT_NE(getBound(r[0], "DerefdVar", NodeKind::DeclRef), nullptr);
}

TEST(Matchers, AnyOfBindsFirstMatchingBranchOnly) {
  auto u = load("void f(){ int x = 1; }");
  auto m = anyOf(varDecl(hasName("x")).bind("first"),
                 varDecl().bind("second"));
  auto r = matchAll(m, u->root());
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].bound.count("first"));
  EXPECT_FALSE(r[0].bound.count("second"));
}

TEST(Matchers, NarrowingVocabulary) {
  auto u = load("struct S{int v;}; extern noreturn void die(int c);\n"
                "extern S* g();\n"
                "int f(int a){ S* p = g(); string s; if (a) { die(1); } else return 2;\n"
                "  while (a) a = a - 1; s.clear(); return (a); }");
  EXPECT_EQ(matchAll(varDecl(hasType(pointerType())), u->root()).size(), 1u);
  EXPECT_EQ(matchAll(varDecl(hasType(stringType())), u->root()).size(), 1u);
  EXPECT_EQ(matchAll(varDecl(hasType(namedType("S"))), u->root()).size(), 0u);
  EXPECT_EQ(matchAll(varDecl(hasInitializer(callExpr())), u->root()).size(), 1u);
  EXPECT_EQ(matchAll(callExpr(callee(functionDecl(isNoReturn()))), u->root()).size(), 1u);
  EXPECT_EQ(matchAll(callExpr(argumentCountIs(1), hasArgument(0, expr())), u->root()).size(), 1u);
  EXPECT_EQ(matchAll(ifStmt(hasThen(compoundStmt(statementCountIs(1),
                                                 hasAnySubstatement(exprStmt()))),
                            hasElse(returnStmt())),
                     u->root())
                .size(),
            1u);
  EXPECT_EQ(matchAll(returnStmt(has(ignoringParens(declRefExpr(to(
                         anyOf(varDecl(), hasName("a"))))))),
                     u->root())
                .size(),
            1u);
  EXPECT_EQ(matchAll(binaryOperator(hasOperatorName("-")), u->root()).size(), 1u);
  EXPECT_EQ(matchAll(methodCallExpr(hasParent(exprStmt())), u->root()).size(), 1u);
}

TEST(Matchers, BuildMatcherErrors) {
  EXPECT_THROW(buildMatcher("noSuchMatcher"), MatcherConfigError);
  EXPECT_THROW(buildMatcher("hasName"), MatcherConfigError);
  EXPECT_THROW(buildMatcher("unless", {varDecl(), varDecl()}), MatcherConfigError);
  EXPECT_THROW(buildMatcher("hasName", {std::int64_t{3}}), MatcherConfigError);
  EXPECT_NO_THROW(buildMatcher("varDecl", {buildMatcher("hasName", {std::string("x")})}));
}

TEST(Matchers, MatchFinderOrder) {
  auto u = load("void f(){ int x = 1; int y = x; }");
  MatchFinder finder;
  std::vector<std::string> log;
  finder.addMatcher(varDecl(), [&](const MatchResult &r) { log.push_back("V:" + r.root->name); });
  finder.addMatcher(declRefExpr(), [&](const MatchResult &r) { log.push_back("R:" + r.root->name); });
  finder.addMatcher(stmt(), [&](const MatchResult &r) { log.push_back(std::string("S:") + nodeKindName(r.root->kind)); });
  finder.run(u->root());
  std::vector<std::string> expect = {"S:Block", "V:x", "S:IntLit", "V:y", "R:x", "S:DeclRef"};
  EXPECT_EQ(log, expect);
}

TEST(MatchersProperty, SetAlgebraAgainstOracle) {
  std::mt19937 rng(7);
  int cases = 0;
  for (int prog = 0; prog < 20; ++prog) {
    auto u = loadUnit("p.mc", oracle::randomProgram(rng));
    ASSERT_TRUE(u->ok()) << formatFrontendErrors(*u) << u->text();
    for (int k = 0; k < 25; ++k, ++cases) {
      auto spec = oracle::randomSpec(rng, 3);
      auto got = matchAll(oracle::buildFromSpec(*spec), u->root());
      auto want = oracle::oracleRoots(*spec, u->root());
      std::set<const Node *> roots;
      for (auto &r : got) {
        roots.insert(r.root);
        if (!spec->bind_label.empty())
          EXPECT_EQ(getBound(r, spec->bind_label), r.root);
      }
      EXPECT_EQ(roots.size(), got.size());
      EXPECT_EQ(roots, want) << oracle::describe(*spec);
    }
  }
  EXPECT_EQ(cases, 500);
}
