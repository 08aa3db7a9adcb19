#include "minisa/frontend/sema.h"

#include "minisa/frontend/builtins.h"

#include <map>
#include <string>

namespace minisa {

namespace {

using B = TypeRef::Base;

class Sema {
public:
  explicit Sema(AstContext &ast) : ast_(ast) {}

  std::vector<FrontendDiag> run() {
    Node *tu = ast_.root();
    if (!tu)
      return {};
    for (Node *d : tu->children) {
      if (d->kind == NodeKind::StructDecl)
        checkStruct(d);
      if (d->kind == NodeKind::FunctionDecl || d->kind == NodeKind::ExternDecl) {
        auto [it, inserted] = functions_.emplace(d->name, d);
        if (!inserted)
          error(d->name_loc, "redefinition of function '" + d->name + "'");
      }
    }
    for (Node *d : tu->children)
      if (d->kind == NodeKind::FunctionDecl || d->kind == NodeKind::ExternDecl)
        checkFunction(d);
    return std::move(errors_);
  }

private:
  void error(SourceLocation loc, std::string msg) {
    errors_.push_back({loc, std::move(msg)});
  }

  // ---- scopes ----
  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }

  void declare(Node *d) {
    if (d->name.empty())
      return;
    auto &top = scopes_.back();
    if (!top.emplace(d->name, d).second)
      error(d->name_loc, "redefinition of '" + d->name + "'");
  }

  Node *lookup(const std::string &name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end())
        return f->second;
    }
    return nullptr;
  }

  // ---- declarations ----
  void checkStruct(Node *s) {
    std::map<std::string, Node *> seen;
    for (Node *f : s->children) {
      if (!seen.emplace(f->name, f).second)
        error(f->name_loc, "duplicate field '" + f->name + "'");
      if (f->type->isVoid())
        error(f->name_loc, "field '" + f->name + "' has type 'void'");
      if (f->type->isStruct() && f->type->struct_name == s->name)
        error(f->name_loc, "field '" + f->name + "' has incomplete type");
    }
  }

  void checkFunction(Node *fn) {
    push();
    for (Node *p : functionParams(fn)) {
      if (p->type->isVoid())
        error(p->range.begin, "parameter has type 'void'");
      declare(p);
    }
    current_fn_ = fn;
    if (Node *body = functionBody(fn))
      checkBlock(body, /*new_scope=*/false);
    current_fn_ = nullptr;
    pop();
  }

  void checkBlock(Node *b, bool new_scope) {
    if (new_scope)
      push();
    for (Node *s : b->children)
      checkStmt(s);
    if (new_scope)
      pop();
  }

  void checkVarDecl(Node *v) {
    const TypeRef &t = *v->type;
    if (t.isVoid())
      error(v->name_loc, "variable '" + v->name + "' has type 'void'");
    if (Node *init = varInit(v)) {
      checkExpr(init);
      checkAssignable(t, init, init->range.begin);
    } else if (t.is_const && t.indirections == 0) {
      error(v->name_loc,
            "default initialization of an object of const type '" +
                t.spelling() + "'");
    }
    declare(v);
  }

  void checkCondition(Node *cond) {
    checkExpr(cond);
    if (cond->type && !cond->type->isScalar())
      error(cond->range.begin, "condition of type '" + cond->type->spelling() +
                                   "' is not a scalar");
  }

  void checkStmt(Node *s) {
    switch (s->kind) {
    case NodeKind::Block:
      checkBlock(s, true);
      return;
    case NodeKind::VarDecl:
      checkVarDecl(s);
      return;
    case NodeKind::IfStmt: {
      push();
      if (Node *init = ifInit(s))
        checkVarDecl(init);
      checkCondition(ifCond(s));
      checkScopedStmt(ifThen(s));
      if (Node *e = ifElse(s))
        checkScopedStmt(e);
      pop();
      return;
    }
    case NodeKind::WhileStmt:
      checkCondition(s->child(0));
      ++loop_depth_;
      checkScopedStmt(s->child(1));
      --loop_depth_;
      return;
    case NodeKind::ReturnStmt: {
      const TypeRef &rt = *current_fn_->type;
      if (s->children.empty()) {
        if (!rt.isVoid())
          error(s->range.begin, "non-void function '" + current_fn_->name +
                                    "' should return a value");
        return;
      }
      Node *e = s->child(0);
      checkExpr(e);
      if (rt.isVoid()) {
        error(e->range.begin, "void function '" + current_fn_->name +
                                  "' should not return a value");
        return;
      }
      checkAssignable(rt, e, e->range.begin);
      return;
    }
    case NodeKind::BreakStmt:
    case NodeKind::ContinueStmt:
      if (loop_depth_ == 0)
        error(s->range.begin,
              std::string("'") +
                  (s->kind == NodeKind::BreakStmt ? "break" : "continue") +
                  "' statement not in loop statement");
      return;
    case NodeKind::DeleteStmt: {
      Node *e = s->child(0);
      checkExpr(e);
      if (e->type && !e->type->isPointer())
        error(e->range.begin, "cannot delete expression of type '" +
                                  e->type->spelling() + "'");
      return;
    }
    case NodeKind::ExprStmt:
      checkExpr(s->child(0));
      return;
    default:
      error(s->range.begin, "unexpected statement");
    }
  }

  /// A sub-statement of if/while gets its own scope even without braces.
  void checkScopedStmt(Node *s) {
    push();
    checkStmt(s);
    pop();
  }

  // ---- conversions ----
  bool assignable(const TypeRef &target, const Node *src) const {
    if (!src->type)
      return true; // already diagnosed
    const TypeRef &st = *src->type;
    if (target.indirections > 0 && isNullPointerConstant(src))
      return true;
    if (!target.sameShape(st))
      return false;
    if (target.indirections > 0 && st.is_const && !target.is_const)
      return false;
    return true;
  }

  void checkAssignable(const TypeRef &target, const Node *src,
                       SourceLocation loc) {
    if (target.is_reference) {
      checkReferenceBinding(target, src, loc);
      return;
    }
    if (!assignable(target, src))
      error(loc, "incompatible types: cannot convert '" +
                     src->type->spelling() + "' to '" +
                     target.unqualified().spelling() + "'");
  }

  void checkReferenceBinding(const TypeRef &param, const Node *arg,
                             SourceLocation loc) {
    if (!arg->type)
      return;
    if (!isLValue(arg)) {
      error(loc, "cannot bind reference parameter to a temporary");
      return;
    }
    if (!param.sameShape(*arg->type)) {
      error(loc, "incompatible types: cannot bind '" + arg->type->spelling() +
                     "' to '" + param.spelling() + "'");
      return;
    }
    if (arg->type->is_const && !param.is_const)
      error(loc, "binding reference of type '" + param.spelling() +
                     "' to value of type '" + arg->type->spelling() +
                     "' drops 'const' qualifier");
  }

  void markLValue(Node *e) {
    for (Node *n = e; n; n = n->kind == NodeKind::Paren ? n->child(0) : nullptr)
      n->needs_lvalue = true;
  }

  // ---- expressions ----
  void setType(Node *e, TypeRef t) {
    t.is_reference = false;
    e->type = t;
  }

  void checkArgs(Node *call, const std::vector<TypeRef> &params,
                 const std::string &callee, bool char_literal_ok) {
    auto args = callArgs(call);
    if (args.size() != params.size()) {
      error(call->range.begin, "call to '" + callee + "' expects " +
                                   std::to_string(params.size()) +
                                   " argument(s), got " +
                                   std::to_string(args.size()));
      for (Node *a : args)
        checkExpr(a);
      return;
    }
    for (size_t i = 0; i < args.size(); ++i) {
      Node *a = args[i];
      checkExpr(a);
      if (!a->type)
        continue;
      const TypeRef &p = params[i];
      if (p.is_reference) {
        markLValue(a);
        checkReferenceBinding(p, a, a->range.begin);
        continue;
      }
      if (char_literal_ok && p.base == B::Char && p.indirections == 0 &&
          ignoringParens(a)->kind == NodeKind::IntLit)
        continue;
      checkAssignable(p, a, a->range.begin);
    }
  }

  void checkExpr(Node *e) {
    switch (e->kind) {
    case NodeKind::IntLit:
      setType(e, TypeRef::make(e->is_char_literal ? B::Char : B::Int));
      return;
    case NodeKind::BoolLit:
      setType(e, TypeRef::make(B::Bool));
      return;
    case NodeKind::StringLit:
      setType(e, TypeRef::make(B::String));
      return;
    case NodeKind::DeclRef: {
      Node *d = lookup(e->name);
      if (!d) {
        if (functions_.count(e->name))
          error(e->range.begin, "function '" + e->name + "' used as a value");
        else
          error(e->range.begin, "use of undeclared identifier '" + e->name + "'");
        return;
      }
      e->decl = d;
      setType(e, *d->type);
      return;
    }
    case NodeKind::Paren:
      checkExpr(e->child(0));
      if (e->child(0)->type)
        setType(e, *e->child(0)->type);
      return;
    case NodeKind::UnaryOp:
      checkUnary(e);
      return;
    case NodeKind::AddressOf: {
      Node *o = e->child(0);
      checkExpr(o);
      if (!o->type)
        return;
      if (!isLValue(o)) {
        error(e->range.begin, "cannot take the address of an rvalue");
        return;
      }
      markLValue(o);
      setType(e, o->type->addPointer());
      return;
    }
    case NodeKind::BinaryOp:
      checkBinary(e);
      return;
    case NodeKind::Assign:
      checkAssign(e);
      return;
    case NodeKind::FieldAccess:
      checkFieldAccess(e);
      return;
    case NodeKind::MethodCall:
      checkMethodCall(e);
      return;
    case NodeKind::Call: {
      auto it = functions_.find(e->name);
      if (it == functions_.end()) {
        error(e->range.begin, "use of undeclared function '" + e->name + "'");
        for (Node *a : e->children)
          checkExpr(a);
        return;
      }
      Node *fn = it->second;
      e->decl = fn;
      std::vector<TypeRef> params;
      for (Node *p : functionParams(fn))
        params.push_back(*p->type);
      checkArgs(e, params, e->name, false);
      setType(e, *fn->type);
      return;
    }
    case NodeKind::NewExpr:
      if (e->type->pointee().isVoid())
        error(e->range.begin, "cannot allocate an object of type 'void'");
      return;
    default:
      error(e->range.begin, "unexpected expression");
    }
  }

  void checkUnary(Node *e) {
    Node *o = e->child(0);
    checkExpr(o);
    if (!o->type)
      return;
    const TypeRef &t = *o->type;
    if (e->op == "!") {
      if (!t.isScalar())
        error(e->range.begin, "invalid operand to '!' of type '" +
                                  t.spelling() + "'");
      setType(e, TypeRef::make(B::Bool));
    } else if (e->op == "-") {
      if (!(t.indirections == 0 && t.base == B::Int))
        error(e->range.begin, "invalid operand to unary '-' of type '" +
                                  t.spelling() + "'");
      setType(e, TypeRef::make(B::Int));
    } else if (e->op == "*") {
      if (!t.isPointer()) {
        error(e->range.begin, "cannot dereference non-pointer");
        return;
      }
      if (t.pointee().isVoid()) {
        error(e->range.begin, "cannot dereference 'void*'");
        return;
      }
      setType(e, t.pointee());
    }
  }

  void checkBinary(Node *e) {
    Node *l = e->child(0), *r = e->child(1);
    checkExpr(l);
    checkExpr(r);
    if (!l->type || !r->type)
      return;
    const TypeRef &lt = *l->type, &rt = *r->type;
    const std::string &op = e->op;
    auto mismatch = [&] {
      error(e->op_loc, "invalid operands to binary '" + op + "' ('" +
                           lt.spelling() + "' and '" + rt.spelling() + "')");
    };
    if (op == ",") {
      setType(e, rt);
      return;
    }
    if (op == "&&" || op == "||") {
      if (!lt.isScalar() || !rt.isScalar())
        mismatch();
      setType(e, TypeRef::make(B::Bool));
      return;
    }
    if (op == "+" || op == "-" || op == "*" || op == "/") {
      bool ok = lt.indirections == 0 && rt.indirections == 0 &&
                lt.base == B::Int && rt.base == B::Int;
      if (!ok)
        mismatch();
      setType(e, TypeRef::make(B::Int));
      return;
    }
    if (op == "==" || op == "!=") {
      bool ok = lt.isScalar() && rt.isScalar() &&
                (lt.sameShape(rt) ||
                 (lt.isPointer() && isNullPointerConstant(r)) ||
                 (rt.isPointer() && isNullPointerConstant(l)));
      if (!ok)
        mismatch();
      setType(e, TypeRef::make(B::Bool));
      return;
    }
    // relational
    bool ok = lt.isIntegral() && lt.base != B::Bool && lt.sameShape(rt);
    if (!ok)
      mismatch();
    setType(e, TypeRef::make(B::Bool));
  }

  void checkAssign(Node *e) {
    Node *l = e->child(0), *r = e->child(1);
    checkExpr(l);
    checkExpr(r);
    if (!l->type || !r->type)
      return;
    const TypeRef &lt = *l->type;
    if (!isLValue(l)) {
      error(e->op_loc, "expression is not assignable");
      return;
    }
    markLValue(l);
    if (lt.is_const && lt.indirections == 0) {
      error(e->op_loc, "cannot assign to const-qualified variable");
      return;
    }
    if (e->op == "+=") {
      bool ok = (lt.indirections == 0 && lt.base == B::Int &&
                 r->type->indirections == 0 && r->type->base == B::Int) ||
                (lt.isString() &&
                 (r->type->isString() ||
                  (r->type->indirections == 0 && r->type->base == B::Char)));
      if (!ok)
        error(e->op_loc, "invalid operands to '+=' ('" + lt.spelling() +
                             "' and '" + r->type->spelling() + "')");
      setType(e, lt.unqualified());
      return;
    }
    checkAssignable(lt.unqualified(), r, r->range.begin);
    setType(e, lt.unqualified());
  }

  void checkFieldAccess(Node *e) {
    Node *base = e->child(0);
    checkExpr(base);
    if (!base->type)
      return;
    TypeRef bt = *base->type;
    if (e->is_arrow) {
      if (bt.indirections != 1) {
        error(e->op_loc, "member reference type '" + bt.spelling() +
                             "' is not a pointer to a struct");
        return;
      }
      bt = bt.pointee();
    } else if (isLValue(base)) {
      markLValue(base);
    }
    if (!bt.isStruct()) {
      error(e->op_loc, "member reference base type '" + bt.spelling() +
                           "' is not a struct");
      return;
    }
    const Node *sd = findStruct(ast_.root(), bt.struct_name);
    const Node *fd = sd ? findField(sd, e->name) : nullptr;
    if (!fd) {
      error(e->name_loc, "no field named '" + e->name + "' in '" +
                             bt.struct_name + "'");
      return;
    }
    e->decl = const_cast<Node *>(fd);
    TypeRef ft = *fd->type;
    if (bt.is_const && ft.indirections == 0)
      ft.is_const = true;
    setType(e, ft);
  }

  void checkMethodCall(Node *e) {
    Node *recv = e->child(0);
    checkExpr(recv);
    const StringMethod *m = findStringMethod(e->name);
    if (!recv->type) {
      for (Node *a : callArgs(e))
        checkExpr(a);
      return;
    }
    TypeRef rt = *recv->type;
    if (e->is_arrow) {
      if (rt.indirections != 1 || rt.base != B::String) {
        error(e->op_loc, "member reference type '" + rt.spelling() +
                             "' is not a pointer to a string");
        return;
      }
      rt = rt.pointee();
    }
    if (!rt.isString()) {
      error(e->op_loc, "methods can only be called on 'string' values");
      return;
    }
    if (!m) {
      error(e->name_loc, "unknown string method '" + e->name + "'");
      for (Node *a : callArgs(e))
        checkExpr(a);
      return;
    }
    if (!e->is_arrow && isLValue(recv))
      markLValue(recv);
    if (!m->is_const && rt.is_const)
      error(e->name_loc, "cannot call non-const method '" + e->name +
                             "' on a const string");
    checkArgs(e, m->params, e->name, m->name == "push_back");
    setType(e, m->result);
  }

  AstContext &ast_;
  std::vector<FrontendDiag> errors_;
  std::vector<std::map<std::string, Node *>> scopes_;
  std::map<std::string, Node *> functions_;
  Node *current_fn_ = nullptr;
  int loop_depth_ = 0;
};

} // namespace

bool isLValue(const Node *e) {
  switch (e->kind) {
  case NodeKind::DeclRef:
    return e->decl && (e->decl->kind == NodeKind::VarDecl ||
                       e->decl->kind == NodeKind::ParamDecl);
  case NodeKind::FieldAccess:
    return e->is_arrow || isLValue(e->child(0));
  case NodeKind::UnaryOp:
    return e->op == "*";
  case NodeKind::Paren:
    return isLValue(e->child(0));
  default:
    return false;
  }
}

bool isNullPointerConstant(const Node *e) {
  const Node *n = ignoringParens(e);
  return n->kind == NodeKind::IntLit && !n->is_char_literal &&
         n->int_value == 0;
}

const Node *findStruct(const Node *tu, std::string_view name) {
  for (const Node *d : tu->children)
    if (d->kind == NodeKind::StructDecl && d->name == name)
      return d;
  return nullptr;
}

const Node *findField(const Node *s, std::string_view name) {
  for (const Node *f : s->children)
    if (f->name == name)
      return f;
  return nullptr;
}

std::vector<FrontendDiag> typecheck(AstContext &ast) {
  return Sema(ast).run();
}

} // namespace minisa
