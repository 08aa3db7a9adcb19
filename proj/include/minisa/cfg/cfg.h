#pragma once

#include "minisa/frontend/ast.h"
#include "minisa/frontend/lexer.h"

#include <string>
#include <vector>

namespace minisa::cfg {

struct CfgElement {
  enum class Kind { Stmt, ImplicitDtor };
  Kind kind = Kind::Stmt;
  /// Stmt: an expression (post-order) or a full-statement marker
  /// (VarDecl, ExprStmt, ReturnStmt, DeleteStmt).
  const Node *stmt = nullptr;
  /// ImplicitDtor: the string variable going out of scope.
  const Node *var = nullptr;
  /// ImplicitDtor: where the scope is left (closing brace, return, break...).
  SourceLocation trigger_loc;
};

struct Terminator {
  enum class Kind { None, Branch, Jump, Return };
  Kind kind = Kind::None;
  const Node *cond = nullptr; // Branch
  int true_target = -1;
  int false_target = -1;
  int target = -1;                // Jump, Return (always the exit block)
  const Node *stmt = nullptr;     // owning if/while/return/&&/||, if any
  bool full_expression = false;   // Branch on a statement condition
  bool back_edge = false;         // Jump closing a loop body
};

struct BasicBlock {
  int id = 0;
  std::vector<CfgElement> elements;
  Terminator term;
  /// Set on while headers; the engine counts back edges into them.
  bool loop_header = false;

  std::vector<int> successors() const;
};

struct Cfg {
  const Node *fn = nullptr;
  std::vector<BasicBlock> blocks;
  int entry = 0;
  int exit = 0;
  /// Tool notes (unreachable code) and defensive errors.
  std::vector<FrontendDiag> notes;

  std::vector<int> predecessors(int block) const;
};

/// Builds the graph for a typechecked FunctionDecl. Blocks are numbered in
/// reverse post-order from the entry; unreachable blocks are dropped.
Cfg buildCfg(const Node *fn);

/// Indexed block listing, one element per line.
std::string dumpCfg(const Cfg &cfg);

/// Short rendering of an element's statement, e.g. `BinaryOp '+' <3:5>`.
std::string describeElement(const CfgElement &e);

} // namespace minisa::cfg
