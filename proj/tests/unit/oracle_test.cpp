#include "dot.h"
#include "interpreter.h"
#include "pathgen.h"

#include "minisa/driver/driver.h"

#include <gtest/gtest.h>

using namespace minisa;
using namespace minisa::oracle;

namespace {

std::unique_ptr<Unit> load(const std::string &src) {
  auto u = loadUnit("t.mc", src);
  EXPECT_TRUE(u->ok()) << formatFrontendErrors(*u);
  return u;
}

} // namespace

TEST(Interpreter, ArithmeticAndDecisions) {
  auto u = load("int f(int a, int b) {\n"
                "  int t = a + 1;\n"
                "  if (t > 3 && !(b == 2)) { return 1; }\n"
                "  return 0;\n"
                "}\n");
  Interpreter in(*u);
  RunResult r = in.call("f", {CValue::integer(5), CValue::integer(7)});
  ASSERT_TRUE(r.ret);
  EXPECT_EQ(r.ret->i, 1);
  EXPECT_TRUE(r.return_taken);
  ASSERT_EQ(r.decisions.size(), 2u);
  EXPECT_TRUE(r.decisions[0].truth);
  EXPECT_FALSE(r.decisions[1].truth); // `b == 2` is false; the `!` is lowered away

  r = in.call("f", {CValue::integer(1), CValue::integer(2)});
  EXPECT_EQ(r.ret->i, 0);
  EXPECT_EQ(r.decisions.size(), 1u); // short circuit
}

TEST(Interpreter, Wraps) {
  auto u = load("int f(int a) { return a + 1; }\n");
  Interpreter in(*u);
  EXPECT_EQ(in.call("f", {CValue::integer(INT64_MAX)}).ret->i, INT64_MIN);
}

TEST(Interpreter, PointersReferencesAndStructs) {
  auto u = load("struct S { int v; };\n"
                "void set(int &x) { x = 9; }\n"
                "int f() {\n"
                "  S s;\n"
                "  s.v = 1;\n"
                "  S *p = &s;\n"
                "  p->v = p->v + 1;\n"
                "  int k = 0;\n"
                "  set(k);\n"
                "  int *q = new int();\n"
                "  *q = 4;\n"
                "  return s.v + k + *q;\n"
                "}\n");
  Interpreter in(*u);
  EXPECT_EQ(in.call("f", {}).ret->i, 2 + 9 + 4);
}

TEST(Interpreter, ErrorsOnUndefinedBehaviour) {
  auto u = load("int f(int a) { int *p = 0; if (a > 0) { return *p; } return 1 / a; }\n");
  Interpreter in(*u);
  EXPECT_THROW(in.call("f", {CValue::integer(1)}), ExecError);
  EXPECT_THROW(in.call("f", {CValue::integer(0)}), ExecError);
  EXPECT_EQ(in.call("f", {CValue::integer(-1)}).ret->i, -1);
}

TEST(Interpreter, ExternHook) {
  auto u = load("extern int *get();\nint f() { int *p = get(); if (p == 0) { return 0; } return *p; }\n");
  Interpreter in(*u);
  in.setExtern("get", [](Interpreter &self, const std::vector<CValue> &) {
    CValue *c = self.allocate(TypeRef::make(TypeRef::Base::Int));
    *c = CValue::integer(6);
    return CValue::pointer(c);
  });
  EXPECT_EQ(in.call("f", {}).ret->i, 6);
  in.setExtern("get", [](Interpreter &, const std::vector<CValue> &) { return CValue::null(); });
  EXPECT_EQ(in.call("f", {}).ret->i, 0);
}

TEST(PathGen, ProgramsParse) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    BranchProgram p = randomBranchProgram(rng);
    auto u = loadUnit("gen.mc", p.source);
    ASSERT_TRUE(u->ok()) << p.source << formatFrontendErrors(*u);
    EXPECT_LE(p.ifs, 4);
  }
}

TEST(PathGen, EngineMatchesInterpreter) {
  std::mt19937_64 rng(20241);
  for (int i = 0; i < 40; ++i) {
    BranchProgram p = randomBranchProgram(rng);
    SoundnessResult r = checkSoundness(p);
    ASSERT_TRUE(r.ok) << p.source << r.detail;
    EXPECT_GE(r.leaves, 1);
  }
}

TEST(Dot, ParsesEngineDump) {
  auto run = driver::analyzeSource("g.mc", "int g(int b) { int x = 42; if (b) { x = b + 1; } return x; }\n");
  auto graphs = parseDot(run.dumpEgraph());
  ASSERT_EQ(graphs.size(), 1u);
  EXPECT_EQ(graphs[0].name, "ExplodedGraph g");
  EXPECT_EQ(graphs[0].sinks().size(), 2u);
  EXPECT_THROW(parseDot("digraph \"x\" {\n  what\n}\n"), std::runtime_error);
}

TEST(Html, Checker) {
  EXPECT_EQ(checkHtml("<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"/></head>"
                      "<body><p>a &amp; b</p></body></html>"),
            "");
  EXPECT_NE(checkHtml("<html><p></html>"), "");
  EXPECT_NE(checkHtml("<p>a & b</p>"), "");
  EXPECT_NE(checkHtml("<p>a > b</p>"), "");
}
