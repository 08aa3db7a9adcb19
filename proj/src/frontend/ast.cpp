#include "minisa/frontend/ast.h"

#include <sstream>

namespace minisa {

const char *nodeKindName(NodeKind kind) {
  switch (kind) {
  case NodeKind::TranslationUnit: return "TranslationUnit";
  case NodeKind::StructDecl: return "StructDecl";
  case NodeKind::FieldDecl: return "FieldDecl";
  case NodeKind::FunctionDecl: return "FunctionDecl";
  case NodeKind::ExternDecl: return "ExternDecl";
  case NodeKind::ParamDecl: return "ParamDecl";
  case NodeKind::VarDecl: return "VarDecl";
  case NodeKind::Block: return "Block";
  case NodeKind::IfStmt: return "IfStmt";
  case NodeKind::WhileStmt: return "WhileStmt";
  case NodeKind::ReturnStmt: return "ReturnStmt";
  case NodeKind::BreakStmt: return "BreakStmt";
  case NodeKind::ContinueStmt: return "ContinueStmt";
  case NodeKind::DeleteStmt: return "DeleteStmt";
  case NodeKind::ExprStmt: return "ExprStmt";
  case NodeKind::IntLit: return "IntLit";
  case NodeKind::BoolLit: return "BoolLit";
  case NodeKind::StringLit: return "StringLit";
  case NodeKind::DeclRef: return "DeclRef";
  case NodeKind::UnaryOp: return "UnaryOp";
  case NodeKind::BinaryOp: return "BinaryOp";
  case NodeKind::Assign: return "Assign";
  case NodeKind::FieldAccess: return "FieldAccess";
  case NodeKind::MethodCall: return "MethodCall";
  case NodeKind::Call: return "Call";
  case NodeKind::NewExpr: return "NewExpr";
  case NodeKind::AddressOf: return "AddressOf";
  case NodeKind::Paren: return "Paren";
  }
  return "?";
}

bool isExprKind(NodeKind kind) {
  return kind >= NodeKind::IntLit && kind <= NodeKind::Paren;
}

bool isDeclKind(NodeKind kind) {
  return kind >= NodeKind::StructDecl && kind <= NodeKind::VarDecl;
}

bool isStmtKind(NodeKind kind) {
  return kind >= NodeKind::Block && kind <= NodeKind::ExprStmt;
}

TypeRef TypeRef::pointee() const {
  TypeRef t = *this;
  t.is_reference = false;
  if (t.indirections > 0)
    --t.indirections;
  return t;
}

TypeRef TypeRef::addPointer() const {
  TypeRef t = *this;
  t.is_reference = false;
  ++t.indirections;
  return t;
}

TypeRef TypeRef::unqualified() const {
  TypeRef t = *this;
  t.is_reference = false;
  if (t.indirections == 0)
    t.is_const = false;
  return t;
}

bool TypeRef::sameShape(const TypeRef &other) const {
  return base == other.base && indirections == other.indirections &&
         (base != Base::Struct || struct_name == other.struct_name);
}

std::string TypeRef::spelling() const {
  std::string s;
  if (is_const)
    s += "const ";
  switch (base) {
  case Base::Int: s += "int"; break;
  case Base::Bool: s += "bool"; break;
  case Base::Char: s += "char"; break;
  case Base::Void: s += "void"; break;
  case Base::String: s += "string"; break;
  case Base::Struct: s += struct_name; break;
  }
  s.append(indirections, '*');
  if (is_reference)
    s += "&";
  return s;
}

Node *varInit(const Node *var) {
  return var->has_init && !var->children.empty() ? var->children[0] : nullptr;
}

Node *ifInit(const Node *ifs) {
  return ifs->has_init ? ifs->children[0] : nullptr;
}

Node *ifCond(const Node *ifs) { return ifs->children[ifs->has_init ? 1 : 0]; }

Node *ifThen(const Node *ifs) { return ifs->children[ifs->has_init ? 2 : 1]; }

Node *ifElse(const Node *ifs) {
  return ifs->has_else ? ifs->children.back() : nullptr;
}

Node *functionBody(const Node *fn) {
  if (fn->kind != NodeKind::FunctionDecl || fn->children.empty())
    return nullptr;
  return fn->children.back();
}

std::vector<Node *> functionParams(const Node *fn) {
  std::vector<Node *> out;
  for (Node *c : fn->children)
    if (c->kind == NodeKind::ParamDecl)
      out.push_back(c);
  return out;
}

std::vector<Node *> callArgs(const Node *call) {
  if (call->kind == NodeKind::MethodCall)
    return {call->children.begin() + 1, call->children.end()};
  return call->children;
}

const Node *ignoringParens(const Node *e) {
  while (e && e->kind == NodeKind::Paren)
    e = e->children[0];
  return e;
}

Node *ignoringParens(Node *e) {
  while (e && e->kind == NodeKind::Paren)
    e = e->children[0];
  return e;
}

Node *AstContext::create(NodeKind kind) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  n->id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(n));
  return nodes_.back().get();
}

namespace {

void dumpNode(const Node *n, int depth, std::ostringstream &os) {
  os << std::string(depth * 2, ' ') << nodeKindName(n->kind) << " <"
     << n->range.begin.line << ":" << n->range.begin.column << ", "
     << n->range.end.line << ":" << n->range.end.column << ">";
  if (n->type)
    os << " [" << n->type->spelling() << "]";
  if (!n->name.empty())
    os << " " << n->name;
  if (!n->op.empty())
    os << " '" << n->op << "'";
  if (n->kind == NodeKind::IntLit)
    os << " " << n->int_value;
  if (n->kind == NodeKind::BoolLit)
    os << (n->int_value ? " true" : " false");
  if (n->kind == NodeKind::FieldAccess)
    os << (n->is_arrow ? " ->" : " .");
  if (n->is_noreturn)
    os << " noreturn";
  os << "\n";
  for (const Node *c : n->children)
    dumpNode(c, depth + 1, os);
}

} // namespace

std::string dumpAst(const Node *root) {
  std::ostringstream os;
  if (root)
    dumpNode(root, 0, os);
  return os.str();
}

} // namespace minisa
