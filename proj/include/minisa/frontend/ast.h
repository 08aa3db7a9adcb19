#pragma once

#include "minisa/frontend/source.h"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace minisa {

enum class NodeKind {
  TranslationUnit,
  StructDecl,
  FieldDecl,
  FunctionDecl,
  ExternDecl,
  ParamDecl,
  VarDecl,
  Block,
  IfStmt,
  WhileStmt,
  ReturnStmt,
  BreakStmt,
  ContinueStmt,
  DeleteStmt,
  ExprStmt,
  IntLit,
  BoolLit,
  StringLit,
  DeclRef,
  UnaryOp,
  BinaryOp,
  Assign,
  FieldAccess,
  MethodCall,
  Call,
  NewExpr,
  AddressOf,
  Paren,
};

constexpr int kNodeKindCount = static_cast<int>(NodeKind::Paren) + 1;

const char *nodeKindName(NodeKind kind);
bool isExprKind(NodeKind kind);
bool isDeclKind(NodeKind kind);
bool isStmtKind(NodeKind kind); // statements, not expressions

struct TypeRef {
  enum class Base { Int, Bool, Char, Void, String, Struct };

  Base base = Base::Int;
  std::string struct_name;
  bool is_const = false;
  int indirections = 0;
  bool is_reference = false;

  static TypeRef make(Base b, int indirections = 0, bool is_const = false) {
    TypeRef t;
    t.base = b;
    t.indirections = indirections;
    t.is_const = is_const;
    return t;
  }

  bool isPointer() const { return indirections > 0; }
  bool isString() const { return base == Base::String && indirections == 0; }
  bool isStruct() const { return base == Base::Struct && indirections == 0; }
  bool isVoid() const { return base == Base::Void && indirections == 0; }
  bool isIntegral() const {
    return indirections == 0 &&
           (base == Base::Int || base == Base::Char || base == Base::Bool);
  }
  bool isScalar() const { return isPointer() || isIntegral(); }

  TypeRef pointee() const;
  TypeRef addPointer() const;
  TypeRef unqualified() const; // drops reference and top-level const

  /// Same base, struct name and indirection count; qualifiers ignored.
  bool sameShape(const TypeRef &other) const;
  bool operator==(const TypeRef &) const = default;

  std::string spelling() const;
};

using NodeId = int;

struct Node {
  NodeKind kind;
  NodeId id = -1;
  SourceRange range;
  Node *parent = nullptr;
  std::vector<Node *> children;

  /// Declared type for decls, value type for expressions.
  std::optional<TypeRef> type;
  /// Resolved declaration (DeclRef, Call).
  Node *decl = nullptr;

  std::string name;   // decl, DeclRef, field, method, callee, struct name
  std::string op;     // UnaryOp/BinaryOp/Assign operator spelling
  std::int64_t int_value = 0;
  std::string str_value; // decoded string literal
  SourceLocation name_loc;
  SourceLocation op_loc;

  bool is_arrow = false;      // FieldAccess
  bool is_noreturn = false;   // ExternDecl
  bool has_init = false;      // VarDecl, IfStmt (init statement)
  bool has_else = false;      // IfStmt
  bool is_char_literal = false;
  bool needs_lvalue = false;  // set by sema for lvalue-context operands

  /// Token index range [first_token, last_token) consumed by the parser.
  int first_token = 0;
  int last_token = 0;

  Node *child(int i) const { return children.at(i); }
  int numChildren() const { return static_cast<int>(children.size()); }
};

// Role accessors. Child layouts:
//   VarDecl      [init?]
//   FunctionDecl [ParamDecl..., Block]
//   ExternDecl   [ParamDecl...]
//   IfStmt       [init?, cond, then, else?]
//   WhileStmt    [cond, body]
//   ReturnStmt   [expr?]
//   DeleteStmt   [expr]
//   ExprStmt     [expr]
//   UnaryOp/AddressOf/Paren/FieldAccess [operand]
//   BinaryOp/Assign [lhs, rhs]
//   MethodCall   [receiver, args...]
//   Call         [args...]
Node *varInit(const Node *var);
Node *ifInit(const Node *ifs);
Node *ifCond(const Node *ifs);
Node *ifThen(const Node *ifs);
Node *ifElse(const Node *ifs);
Node *functionBody(const Node *fn);
std::vector<Node *> functionParams(const Node *fn);
std::vector<Node *> callArgs(const Node *call);
const Node *ignoringParens(const Node *e);
Node *ignoringParens(Node *e);

class AstContext {
public:
  AstContext() = default;
  AstContext(const AstContext &) = delete;
  AstContext &operator=(const AstContext &) = delete;

  Node *create(NodeKind kind);
  Node *root() const { return root_; }
  void setRoot(Node *n) { root_ = n; }
  int size() const { return static_cast<int>(nodes_.size()); }
  Node *node(NodeId id) const { return nodes_.at(id).get(); }

  /// Pre-order traversal of the subtree rooted at `n`.
  template <typename F> static void preorder(Node *n, F &&fn) {
    fn(n);
    for (Node *c : n->children)
      preorder(c, fn);
  }

private:
  std::vector<std::unique_ptr<Node>> nodes_;
  Node *root_ = nullptr;
};

std::string dumpAst(const Node *root);

} // namespace minisa
