#include "minisa/cfg/cfg.h"
#include "minisa/frontend/frontend.h"

#include <gtest/gtest.h>

using namespace minisa;
using namespace minisa::cfg;

namespace {

struct Built {
  std::unique_ptr<Unit> unit;
  Cfg cfg;
};

Built build(const std::string &src, const std::string &fn) {
  Built b;
  b.unit = loadUnit("t.mc", src);
  EXPECT_TRUE(b.unit->ok()) << formatFrontendErrors(*b.unit);
  for (Node *d : b.unit->root()->children)
    if (d->kind == NodeKind::FunctionDecl && d->name == fn)
      b.cfg = buildCfg(d);
  return b;
}

int countDtors(const BasicBlock &bb) {
  int n = 0;
  for (const CfgElement &e : bb.elements)
    n += e.kind == CfgElement::Kind::ImplicitDtor;
  return n;
}

} // namespace

TEST(Cfg, StraightLineIsOneBlock) {
  auto b = build("void f() { int a = 1; int c = a + 2; }\n", "f");
  ASSERT_EQ(b.cfg.blocks.size(), 2u);
  EXPECT_EQ(b.cfg.entry, 0);
  EXPECT_EQ(b.cfg.exit, 1);
  // post-order: IntLit, VarDecl, DeclRef, IntLit, BinaryOp, VarDecl
  const auto &els = b.cfg.blocks[0].elements;
  ASSERT_EQ(els.size(), 6u);
  EXPECT_EQ(els[1].stmt->kind, NodeKind::VarDecl);
  EXPECT_EQ(els[4].stmt->kind, NodeKind::BinaryOp);
}

TEST(Cfg, DiamondForG) {
  auto b = build("void g(int b, int &x) {\n if (b)\n x = b + 1;\n else\n x = 42;\n}\n", "g");
  const Cfg &c = b.cfg;
  ASSERT_EQ(c.blocks.size(), 5u);
  const Terminator &t = c.blocks[c.entry].term;
  ASSERT_EQ(t.kind, Terminator::Kind::Branch);
  EXPECT_TRUE(t.full_expression);
  int join = c.blocks[t.true_target].term.target;
  EXPECT_EQ(join, c.blocks[t.false_target].term.target);
  EXPECT_EQ(c.predecessors(join).size(), 2u);
}

TEST(Cfg, DestructorOnEveryReturnEdge) {
  auto b = build("int h(int k) { string s; if (k) return 2; return 3; }\n", "h");
  int returns = 0;
  for (const BasicBlock &bb : b.cfg.blocks)
    if (bb.term.kind == Terminator::Kind::Return) {
      ++returns;
      EXPECT_EQ(countDtors(bb), 1);
      EXPECT_EQ(bb.elements.back().kind, CfgElement::Kind::ImplicitDtor);
    }
  EXPECT_EQ(returns, 2);
}

TEST(Cfg, ShortCircuitLowersToBranches) {
  auto b = build("int f(int a, int c) { if (a && c) return 1; return 0; }\n", "f");
  int branches = 0;
  for (const BasicBlock &bb : b.cfg.blocks)
    if (bb.term.kind == Terminator::Kind::Branch) {
      ++branches;
      EXPECT_EQ(bb.term.cond->kind, NodeKind::DeclRef);
    }
  EXPECT_EQ(branches, 2);
}

TEST(Cfg, LoopHasBackEdge) {
  auto b = build("void f() { int i = 0; while (i < 3) i = i + 1; }\n", "f");
  int back = 0, headers = 0;
  for (const BasicBlock &bb : b.cfg.blocks) {
    back += bb.term.kind == Terminator::Kind::Jump && bb.term.back_edge;
    headers += bb.loop_header;
  }
  EXPECT_EQ(back, 1);
  EXPECT_EQ(headers, 1);
}

TEST(Cfg, BlocksInReversePostOrder) {
  auto b = build("int f(int a) { int r = 0; if (a) { if (a > 2) r = 1; } else r = 2; return r; }\n",
                 "f");
  const Cfg &c = b.cfg;
  EXPECT_EQ(c.exit, static_cast<int>(c.blocks.size()) - 1);
  for (const BasicBlock &bb : c.blocks)
    for (int s : bb.successors())
      if (!(bb.term.kind == Terminator::Kind::Jump && bb.term.back_edge))
        EXPECT_GT(s, bb.id);
}

TEST(Cfg, UnreachableCodeNoted) {
  auto b = build("int f() { return 1; int z = 2; }\n", "f");
  ASSERT_FALSE(b.cfg.notes.empty());
  EXPECT_EQ(b.cfg.notes[0].message, "unreachable code");
}
