#include "corpus.h"

#include "minisa/driver/driver.h"

#include <gtest/gtest.h>

using namespace minisa;

namespace {

driver::AnalyzeRun run(const std::string &src, const std::string &checkers = "") {
  driver::AnalyzeConfig cfg;
  cfg.checkers = checkers;
  return driver::analyzeSource("t.mc", src, cfg);
}

int countFrom(const driver::AnalyzeRun &r, const std::string &checker) {
  int n = 0;
  for (const auto &rep : r.result.reports)
    n += rep.checker == checker;
  return n;
}

} // namespace

TEST(Registry, NamesAndHelp) {
  std::vector<std::string> names;
  for (const auto &c : checkers::builtinCheckers())
    names.push_back(c.name);
  EXPECT_EQ(names, (std::vector<std::string>{"core.DivideZero", "cplusplus.InnerPointer",
                                             "unix.MallocLite"}));
  std::string help = checkers::checkerHelp(checkers::builtinCheckers());
  EXPECT_EQ(help.rfind("OVERVIEW: MiniLang Static Analyzer Checkers List\n\n", 0), 0u);
  EXPECT_NE(help.find("USAGE: --checker=<CHECKER or PACKAGE,...>"), std::string::npos);
  EXPECT_NE(help.find("\n  cplusplus.InnerPointer    "), std::string::npos);
}

TEST(Registry, Selection) {
  auto sel = checkers::selectCheckers("cplusplus.InnerPointer");
  EXPECT_EQ(sel.requested, (std::set<std::string>{"cplusplus.InnerPointer"}));
  EXPECT_EQ(sel.enabled, (std::set<std::string>{"cplusplus.InnerPointer", "unix.MallocLite"}));
  EXPECT_EQ(checkers::selectCheckers("unix").enabled, (std::set<std::string>{"unix.MallocLite"}));
  EXPECT_EQ(checkers::selectCheckers("").enabled.size(), 3u);
  EXPECT_THROW(checkers::selectCheckers("core.Nope"), sym::ConfigError);
  EXPECT_THROW(checkers::selectCheckers("alpha"), sym::ConfigError);
}

TEST(InnerPointer, InvalidationMatrix) {
  for (const auto &c : oracle::invalidationMatrix()) {
    auto r = run(c.source, "cplusplus.InnerPointer");
    EXPECT_EQ(countFrom(r, "cplusplus.InnerPointer"), c.expected_reports) << c.name;
    EXPECT_EQ((int)r.result.reports.size(), c.expected_reports) << c.name;
  }
}

TEST(InnerPointer, SwapInvalidatesBothSides) {
  auto r = run("extern void consume(const char *c);\n"
               "void f() {\n"
               "  string s = \"a\";\n"
               "  string t = \"b\";\n"
               "  const char *c = t.c_str();\n"
               "  s.swap(t);\n"
               "  consume(c);\n"
               "}\n");
  ASSERT_EQ(r.paths.size(), 1u);
  EXPECT_EQ(r.paths[0].pieces[1].message, "Inner buffer of 'string' reallocated by call to 'swap'");
}

TEST(InnerPointer, NonConstRefArgumentInvalidates) {
  auto r = run("extern void consume(const char *c);\n"
               "extern void mutate(string &s);\n"
               "extern void look(const string &s);\n"
               "void f() {\n"
               "  string s = \"a\";\n"
               "  const char *c = s.c_str();\n"
               "  look(s);\n"
               "  consume(c);\n"
               "  mutate(s);\n"
               "  consume(c);\n"
               "}\n");
  ASSERT_EQ(r.result.reports.size(), 1u);
  EXPECT_EQ(r.result.reports[0].loc.line, 10);
  EXPECT_EQ(r.paths[0].pieces[1].message, "Inner buffer of 'string' reallocated by call to 'mutate'");
}

TEST(InnerPointer, ReassignedPointerIsNotTracked) {
  auto r = run("extern void consume(const char *c);\n"
               "void f() {\n"
               "  string s = \"a\";\n"
               "  const char *c = s.c_str();\n"
               "  c = 0;\n"
               "  s.clear();\n"
               "  consume(c);\n"
               "}\n");
  EXPECT_TRUE(r.result.reports.empty());
}

TEST(InnerPointer, DeadEntriesAreCleanedUp) {
  auto r = run("void f() {\n"
               "  string s = \"a\";\n"
               "  const char *c = s.c_str();\n"
               "  s.clear();\n"
               "  c = 0;\n"
               "  int k = 1;\n"
               "}\n");
  EXPECT_TRUE(r.result.reports.empty());
  const auto *g = r.result.graphFor("f");
  ASSERT_NE(g, nullptr);
  for (const auto *leaf : g->leaves())
    for (const auto &[h, d] : leaf->state.slots())
      EXPECT_TRUE(d->empty()) << d->dump(g->symbols);
}

TEST(InnerPointer, PathSensitive) {
  auto r = run("extern void consume(const char *c);\n"
               "void f(int flag) {\n"
               "  string s = \"a\";\n"
               "  const char *c = s.c_str();\n"
               "  if (flag)\n"
               "    s.clear();\n"
               "  if (!flag)\n"
               "    consume(c);\n"
               "}\n");
  EXPECT_TRUE(r.result.reports.empty());
}

TEST(DivZero, Cases) {
  struct Case {
    const char *src;
    int reports;
  } cases[] = {
      {"int f(int x) { return 10 / x; }\n", 0},
      {"int f(int x) { if (x == 0) return 10 / x; return 0; }\n", 1},
      {"int f() { int z = 0; return 1 / z; }\n", 1},
      {"int f(int x) { if (x) return 1; return 5 / (x + 1); }\n", 0},
      {"int f(int x) { if (x == 3) return 1 / (x - 3); return 0; }\n", 1},
      {"int f(int x) { int a = 10 / x; if (x == 0) return 1 / x; return a; }\n", 0},
  };
  for (const auto &c : cases)
    EXPECT_EQ((int)run(c.src, "core.DivideZero").result.reports.size(), c.reports) << c.src;
}

TEST(DivZero, ReportShape) {
  auto r = run("int f(int x) {\n  if (x == 0)\n    return 7 / x;\n  return 0;\n}\n");
  ASSERT_EQ(r.result.reports.size(), 1u);
  const auto &rep = r.result.reports[0];
  EXPECT_EQ(rep.message, "Division by zero");
  EXPECT_EQ(rep.category, "Logic error");
  EXPECT_EQ(rep.checker, "core.DivideZero");
  EXPECT_EQ(rep.loc.line, 3);
  EXPECT_EQ(rep.loc.column, 14);
}

TEST(Heap, ReportsNeedMallocLiteRequested) {
  const char *src = "char *f() {\n"
                    "  char *s = new char();\n"
                    "  char *c = s;\n"
                    "  delete s;\n"
                    "  return c;\n"
                    "}\n";
  EXPECT_EQ(run(src, "cplusplus.InnerPointer").result.reports.size(), 0u);
  auto r = run(src, "unix.MallocLite");
  ASSERT_EQ(r.result.reports.size(), 1u);
  EXPECT_EQ(r.result.reports[0].message, "Use of memory after it is freed");
  EXPECT_EQ(r.result.reports[0].loc.line, 5);
}

TEST(Heap, DoubleAndBadFree) {
  auto r = run("void f() { int *p = new int(); delete p; delete p; }\n", "unix.MallocLite");
  ASSERT_EQ(r.result.reports.size(), 1u);
  EXPECT_EQ(r.result.reports[0].message, "Attempt to free released memory");
  r = run("void f() { int x = 1; int *p = &x; delete p; }\n", "unix.MallocLite");
  ASSERT_EQ(r.result.reports.size(), 1u);
  EXPECT_EQ(r.result.reports[0].bug_type, "Bad free");
}

TEST(Heap, DerefAfterDelete) {
  auto r = run("struct S { int v; };\n"
               "int f() { S *p = new S(); p->v = 1; delete p; return p->v; }\n",
               "unix.MallocLite");
  ASSERT_EQ(r.result.reports.size(), 1u);
  EXPECT_EQ(r.result.reports[0].message, "Use of memory after it is freed");
}
