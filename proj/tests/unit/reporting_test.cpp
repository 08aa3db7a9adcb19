#include "dot.h"

#include "minisa/driver/driver.h"

#include <gtest/gtest.h>

using namespace minisa;

namespace {

const char *kClear = "const char *useAfterClear() {\n"
                     "  string s = \"hello\";\n"
                     "  const char *c = s.c_str();\n"
                     "  s.clear();\n"
                     "  return c;\n"
                     "}\n";

const char *kVerify =
    "extern void consume(const char *c);\n"
    "\n"
    "void deref_after_clear() {\n"
    "  const char *c;\n"
    "  string s;\n"
    "  c = s.c_str(); // expected-note {{Pointer to inner buffer of 'string' obtained here}}\n"
    "  s.clear();     // expected-note {{Inner buffer of 'string' reallocated by call to 'clear'}}\n"
    "  consume(c);\n"
    "  // expected-warning@-1 {{Inner pointer of container used after re/deallocation}}\n"
    "  // expected-note@-2 {{Inner pointer of container used after re/deallocation}}\n"
    "}\n";

report::VerifyResult verify(const std::string &src) {
  auto r = driver::analyzeSource("v.mc", src);
  return report::verifyRun(src, r.renderText());
}

} // namespace

TEST(BugPath, PiecesInOrder) {
  auto r = driver::analyzeSource("t.mc", kClear);
  ASSERT_EQ(r.paths.size(), 1u);
  const auto &p = r.paths[0].pieces;
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].message, "Pointer to inner buffer of 'string' obtained here");
  EXPECT_EQ(p[0].loc.line, 3);
  EXPECT_EQ(p[1].message, "Inner buffer of 'string' reallocated by call to 'clear'");
  EXPECT_EQ(p[1].loc.line, 4);
  EXPECT_EQ(p[2].kind, sym::PathPiece::Kind::FinalWarning);
  EXPECT_EQ(p[2].loc.line, 5);
}

TEST(BugPath, WithoutVisitorsOnlyFinalPiece) {
  auto r = driver::analyzeSource("t.mc", "int f() { int z = 0; return 4 / z; }\n");
  ASSERT_EQ(r.paths.size(), 1u);
  ASSERT_EQ(r.paths[0].pieces.size(), 1u);
  EXPECT_EQ(r.paths[0].pieces[0].message, "Division by zero");
}

TEST(BugPath, DetachedErrorNodeThrows) {
  auto r = driver::analyzeSource("t.mc", kClear);
  sym::BugReport copy = r.result.reports[0];
  sym::ExplodedGraph other(nullptr, 10);
  copy.graph = &other;
  EXPECT_THROW(report::assembleBugPath(copy), std::logic_error);
}

TEST(Text, RenderAndFooter) {
  auto r = driver::analyzeSource("t.mc", kClear);
  std::string text = r.renderText();
  EXPECT_EQ(text.rfind("t.mc:5:3: warning: Inner pointer of container used after "
                       "re/deallocation [cplusplus.InnerPointer]\n  return c;\n  ^\n",
                       0),
            0u);
  EXPECT_NE(text.find("t.mc:3:19: note: Pointer to inner buffer of 'string' obtained here"),
            std::string::npos);
  const std::string footer = "Found 1 defect(s) in t.mc\n";
  ASSERT_GE(text.size(), footer.size());
  EXPECT_EQ(text.substr(text.size() - footer.size()), footer);

  report::TextOptions no_dup;
  no_dup.duplicate_warning_note = false;
  std::string short_text = r.renderText(no_dup);
  EXPECT_EQ(short_text.find("5:3: note:"), std::string::npos);
  EXPECT_NE(text.find("5:3: note:"), std::string::npos);
}

TEST(Html, WellFormedAndComplete) {
  auto r = driver::analyzeSource("a<b>.mc", kClear);
  std::string html = report::renderHtml(r.paths, *r.unit->file);
  EXPECT_EQ(oracle::checkHtml(html), "");
  EXPECT_NE(html.find("a&lt;b&gt;.mc"), std::string::npos);
  EXPECT_NE(html.find("Pointer to inner buffer of 'string' obtained here"), std::string::npos);
  EXPECT_NE(html.find("<pre>  s.clear();</pre>"), std::string::npos);
  EXPECT_EQ(html.find("<script"), std::string::npos);

  auto clean = driver::analyzeSource("c.mc", "int f() { return 1; }\n");
  std::string empty = report::renderHtml(clean.paths, *clean.unit->file);
  EXPECT_EQ(oracle::checkHtml(empty), "");
  EXPECT_NE(empty.find("No defects found"), std::string::npos);
}

TEST(Verify, PortedFilePasses) {
  auto v = verify(kVerify);
  EXPECT_TRUE(v.ok);
  EXPECT_TRUE(v.mismatches.empty());
}

TEST(Verify, DirectivesParsed) {
  auto ds = report::parseDirectives(kVerify);
  ASSERT_EQ(ds.size(), 4u);
  EXPECT_EQ(ds[2].severity, Severity::Warning);
  EXPECT_EQ(ds[2].line, 8);
  EXPECT_EQ(ds[3].line, 8);
  EXPECT_EQ(ds[3].directive_line, 10);
}

TEST(Verify, EachMutationGivesOneMismatch) {
  std::string src = kVerify;
  struct Mut {
    std::string from, to;
  } muts[] = {
      {"obtained here}}", "obtained there}}"},
      {"call to 'clear'}}", "call to 'erase'}}"},
      {"expected-warning@-1 {{Inner pointer", "expected-warning@-1 {{Outer pointer"},
      {"expected-note@-2 {{Inner pointer", "expected-note@-2 {{Inner pointr"},
      {"expected-warning@-1", "expected-warning@-2"},
      {"expected-note@-2", "expected-note@-1"},
  };
  for (const auto &m : muts) {
    std::string mutated = src;
    size_t at = mutated.find(m.from);
    ASSERT_NE(at, std::string::npos) << m.from;
    mutated.replace(at, m.from.size(), m.to);
    auto v = verify(mutated);
    EXPECT_FALSE(v.ok) << m.to;
    EXPECT_EQ(v.mismatches.size(), 1u) << m.to;
  }
}

TEST(Verify, MalformedDirectiveThrows) {
  EXPECT_THROW(report::parseDirectives("int x; // expected-warning {{oops}\n"), report::VerifyError);
  EXPECT_THROW(report::parseDirectives("int x; // expected-note@-5 {{x}}\n"), report::VerifyError);
  EXPECT_THROW(report::parseDirectives("int x; // expected-warning {{}}\n"), report::VerifyError);
  EXPECT_TRUE(report::parseDirectives("int x; // nothing expected here\n").empty());
}

TEST(Verify, UnexpectedDiagnosticIsListed) {
  auto v = verify("int f() { int z = 0; return 1 / z; }\n");
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.mismatches.size(), 2u); // warning plus its note
}
