#include "minisa/frontend/parser.h"

#include <charconv>
#include <set>
#include <stdexcept>

namespace minisa {

namespace {

struct SyntaxError : std::runtime_error {
  SourceLocation loc;
  SyntaxError(SourceLocation l, const std::string &msg)
      : std::runtime_error(msg), loc(l) {}
};

class Parser {
public:
  Parser(const std::vector<Token> &toks, const SourceFile &file,
         const ParseOptions &opts)
      : toks_(toks), file_(file), opts_(opts) {
    result_.ast = std::make_unique<AstContext>();
  }

  ParseResult run() {
    Node *tu = create(NodeKind::TranslationUnit);
    tu->first_token = 0;
    while (!atEnd()) {
      int before = pos_;
      try {
        if (Node *d = parseTopLevel())
          attach(tu, d);
      } catch (const SyntaxError &e) {
        result_.errors.push_back({e.loc, e.what()});
        recover(/*top_level=*/true);
        if (pos_ == before)
          ++pos_;
      }
    }
    tu->last_token = pos_;
    tu->range = {file_.locationAt(0),
                 file_.locationAt(static_cast<int>(file_.text().size()))};
    result_.ast->setRoot(tu);
    return std::move(result_);
  }

private:
  // ---- token helpers ----
  const Token &cur() const { return toks_[pos_]; }
  const Token &peekTok(int n = 1) const {
    int p = pos_ + n;
    return p < static_cast<int>(toks_.size()) ? toks_[p] : toks_.back();
  }
  bool atEnd() const { return cur().kind == TokenKind::EndOfFile; }
  bool isPunct(std::string_view p) const { return cur().isPunct(p); }
  bool isKw(std::string_view k) const { return cur().isKeyword(k); }

  [[noreturn]] void fail(const std::string &msg) const {
    throw SyntaxError(cur().range.begin, msg);
  }

  std::string describeCur() const {
    if (atEnd())
      return "end of file";
    return "'" + cur().text + "'";
  }

  const Token &expectPunct(std::string_view p) {
    if (!isPunct(p))
      fail("expected '" + std::string(p) + "' before " + describeCur());
    return toks_[pos_++];
  }

  const Token &expectIdent(const char *what) {
    if (cur().kind != TokenKind::Identifier)
      fail(std::string("expected ") + what + " before " + describeCur());
    return toks_[pos_++];
  }

  bool acceptPunct(std::string_view p) {
    if (isPunct(p)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void recover(bool top_level) {
    while (!atEnd()) {
      if (isPunct(";")) {
        ++pos_;
        return;
      }
      if (isPunct("}")) {
        if (top_level)
          ++pos_;
        return;
      }
      ++pos_;
    }
  }

  // ---- node helpers ----
  Node *create(NodeKind k) { return result_.ast->create(k); }

  Node *begin(NodeKind k, int first) {
    Node *n = create(k);
    n->first_token = first;
    return n;
  }

  Node *finish(Node *n) {
    n->last_token = pos_;
    n->range.begin = toks_[n->first_token].range.begin;
    n->range.end = pos_ > n->first_token ? toks_[pos_ - 1].range.end
                                         : toks_[n->first_token].range.begin;
    return n;
  }

  static void attach(Node *parent, Node *child) {
    child->parent = parent;
    parent->children.push_back(child);
  }

  // ---- types ----
  bool startsType(int at = 0) const {
    const Token &t = peekTok(at);
    if (t.kind == TokenKind::Keyword)
      return t.text == "int" || t.text == "bool" || t.text == "char" ||
             t.text == "void" || t.text == "string" || t.text == "const";
    return t.kind == TokenKind::Identifier && structs_.count(t.text);
  }

  /// At statement start: does a declaration follow?
  bool startsDecl() const {
    const Token &t = cur();
    if (t.kind == TokenKind::Keyword)
      return startsType();
    if (t.kind == TokenKind::Identifier && structs_.count(t.text)) {
      const Token &n = peekTok();
      return n.kind == TokenKind::Identifier || n.isPunct("*");
    }
    return false;
  }

  TypeRef parseType() {
    TypeRef t;
    if (isKw("const")) {
      t.is_const = true;
      ++pos_;
    }
    const Token &b = cur();
    if (b.isKeyword("int"))
      t.base = TypeRef::Base::Int;
    else if (b.isKeyword("bool"))
      t.base = TypeRef::Base::Bool;
    else if (b.isKeyword("char"))
      t.base = TypeRef::Base::Char;
    else if (b.isKeyword("void"))
      t.base = TypeRef::Base::Void;
    else if (b.isKeyword("string"))
      t.base = TypeRef::Base::String;
    else if (b.kind == TokenKind::Identifier && structs_.count(b.text)) {
      t.base = TypeRef::Base::Struct;
      t.struct_name = b.text;
    } else if (b.kind == TokenKind::Identifier) {
      fail("unknown type name '" + b.text + "'");
    } else {
      fail("expected a type before " + describeCur());
    }
    ++pos_;
    while (acceptPunct("*"))
      ++t.indirections;
    if (t.base == TypeRef::Base::Void && t.indirections > 1)
      fail("'void' may have at most one level of indirection");
    return t;
  }

  // ---- top level ----
  Node *parseTopLevel() {
    int first = pos_;
    if (isKw("struct"))
      return parseStruct();
    if (isKw("extern")) {
      ++pos_;
      Node *d = begin(NodeKind::ExternDecl, first);
      if (isKw("noreturn")) {
        d->is_noreturn = true;
        ++pos_;
      }
      d->type = parseType();
      const Token &name = expectIdent("function name");
      d->name = name.text;
      d->name_loc = name.range.begin;
      parseParams(d);
      expectPunct(";");
      return finish(d);
    }
    if (!startsType())
      fail("expected a declaration before " + describeCur());
    Node *fn = begin(NodeKind::FunctionDecl, first);
    fn->type = parseType();
    const Token &name = expectIdent("function name");
    fn->name = name.text;
    fn->name_loc = name.range.begin;
    parseParams(fn);
    if (!isPunct("{"))
      fail("expected function body before " + describeCur());
    attach(fn, parseBlock());
    return finish(fn);
  }

  Node *parseStruct() {
    int first = pos_;
    ++pos_; // struct
    Node *s = begin(NodeKind::StructDecl, first);
    const Token &name = expectIdent("struct name");
    s->name = name.text;
    s->name_loc = name.range.begin;
    structs_.insert(s->name); // self-referential pointers are allowed
    expectPunct("{");
    while (!isPunct("}")) {
      if (atEnd())
        fail("expected '}' before end of file");
      int ffirst = pos_;
      Node *f = begin(NodeKind::FieldDecl, ffirst);
      f->type = parseType();
      const Token &fname = expectIdent("field name");
      f->name = fname.text;
      f->name_loc = fname.range.begin;
      expectPunct(";");
      attach(s, finish(f));
    }
    expectPunct("}");
    expectPunct(";");
    return finish(s);
  }

  void parseParams(Node *fn) {
    expectPunct("(");
    if (isKw("void") && peekTok().isPunct(")")) {
      ++pos_;
    }
    if (!isPunct(")")) {
      while (true) {
        int first = pos_;
        Node *p = begin(NodeKind::ParamDecl, first);
        TypeRef t = parseType();
        if (acceptPunct("&"))
          t.is_reference = true;
        p->type = t;
        if (cur().kind == TokenKind::Identifier) {
          p->name = cur().text;
          p->name_loc = cur().range.begin;
          ++pos_;
        } else if (fn->kind == NodeKind::FunctionDecl) {
          fail("expected parameter name before " + describeCur());
        }
        attach(fn, finish(p));
        if (!acceptPunct(","))
          break;
      }
    }
    expectPunct(")");
  }

  // ---- statements ----
  Node *parseBlock() {
    int first = pos_;
    Node *b = begin(NodeKind::Block, first);
    expectPunct("{");
    while (!isPunct("}")) {
      if (atEnd())
        fail("expected '}' before end of file");
      int before = pos_;
      try {
        attach(b, parseStmt());
      } catch (const SyntaxError &e) {
        result_.errors.push_back({e.loc, e.what()});
        recover(/*top_level=*/false);
        if (pos_ == before)
          ++pos_;
      }
    }
    expectPunct("}");
    return finish(b);
  }

  Node *parseVarDecl(bool require_semi) {
    int first = pos_;
    Node *v = begin(NodeKind::VarDecl, first);
    v->type = parseType();
    const Token &name = expectIdent("variable name");
    v->name = name.text;
    v->name_loc = name.range.begin;
    if (acceptPunct("=")) {
      v->has_init = true;
      attach(v, parseAssignment());
    }
    finish(v); // the range excludes the terminating ';'
    if (require_semi)
      expectPunct(";");
    return v;
  }

  Node *parseStmt() {
    int first = pos_;
    if (isPunct("{"))
      return parseBlock();
    if (isKw("if"))
      return parseIf();
    if (isKw("while")) {
      ++pos_;
      Node *w = begin(NodeKind::WhileStmt, first);
      expectPunct("(");
      attach(w, parseExpr());
      expectPunct(")");
      attach(w, parseStmt());
      return finish(w);
    }
    if (isKw("return")) {
      ++pos_;
      Node *r = begin(NodeKind::ReturnStmt, first);
      if (!isPunct(";"))
        attach(r, parseExpr());
      expectPunct(";");
      return finish(r);
    }
    if (isKw("break") || isKw("continue")) {
      NodeKind k = isKw("break") ? NodeKind::BreakStmt : NodeKind::ContinueStmt;
      ++pos_;
      Node *s = begin(k, first);
      expectPunct(";");
      return finish(s);
    }
    if (isKw("delete")) {
      ++pos_;
      Node *d = begin(NodeKind::DeleteStmt, first);
      attach(d, parseExpr());
      expectPunct(";");
      return finish(d);
    }
    if (startsDecl())
      return parseVarDecl(true);
    Node *s = begin(NodeKind::ExprStmt, first);
    attach(s, parseExpr());
    expectPunct(";");
    return finish(s);
  }

  Node *parseIf() {
    int first = pos_;
    ++pos_; // if
    Node *s = begin(NodeKind::IfStmt, first);
    expectPunct("(");
    if (startsDecl()) {
      SourceLocation at = cur().range.begin;
      if (opts_.std_mode < 17)
        result_.errors.push_back(
            {at, "if statement with initializer requires --std=17"});
      s->has_init = true;
      attach(s, parseVarDecl(false));
      expectPunct(";");
    }
    attach(s, parseExpr());
    expectPunct(")");
    attach(s, parseStmt());
    if (isKw("else")) {
      ++pos_;
      s->has_else = true;
      attach(s, parseStmt());
    }
    return finish(s);
  }

  // ---- expressions ----
  Node *parseExpr() {
    int first = pos_;
    Node *lhs = parseAssignment();
    while (isPunct(",")) {
      SourceLocation op = cur().range.begin;
      ++pos_;
      Node *rhs = parseAssignment();
      lhs = binary(NodeKind::BinaryOp, ",", op, lhs, rhs, first);
    }
    return lhs;
  }

  Node *binary(NodeKind k, std::string op, SourceLocation op_loc, Node *lhs,
               Node *rhs, int first) {
    Node *n = begin(k, first);
    n->op = std::move(op);
    n->op_loc = op_loc;
    attach(n, lhs);
    attach(n, rhs);
    return finish(n);
  }

  Node *parseAssignment() {
    int first = pos_;
    Node *lhs = parseBinary(0);
    if (isPunct("=") || isPunct("+=")) {
      std::string op = cur().text;
      SourceLocation op_loc = cur().range.begin;
      ++pos_;
      Node *rhs = parseAssignment();
      return binary(NodeKind::Assign, op, op_loc, lhs, rhs, first);
    }
    return lhs;
  }

  static int precedence(const Token &t) {
    if (t.kind != TokenKind::Punctuator)
      return -1;
    const std::string &s = t.text;
    if (s == "||") return 0;
    if (s == "&&") return 1;
    if (s == "==" || s == "!=") return 2;
    if (s == "<" || s == "<=" || s == ">" || s == ">=") return 3;
    if (s == "+" || s == "-") return 4;
    if (s == "*" || s == "/") return 5;
    return -1;
  }

  Node *parseBinary(int min_prec) {
    int first = pos_;
    Node *lhs = parseUnary();
    while (true) {
      int prec = precedence(cur());
      if (prec < min_prec)
        return lhs;
      std::string op = cur().text;
      SourceLocation op_loc = cur().range.begin;
      ++pos_;
      Node *rhs = parseBinary(prec + 1);
      lhs = binary(NodeKind::BinaryOp, op, op_loc, lhs, rhs, first);
    }
  }

  Node *parseUnary() {
    int first = pos_;
    if (isPunct("!") || isPunct("-") || isPunct("*") || isPunct("&")) {
      std::string op = cur().text;
      SourceLocation op_loc = cur().range.begin;
      ++pos_;
      Node *operand = parseUnary();
      Node *n = begin(op == "&" ? NodeKind::AddressOf : NodeKind::UnaryOp,
                      first);
      n->op = op;
      n->op_loc = op_loc;
      attach(n, operand);
      return finish(n);
    }
    return parsePostfix();
  }

  Node *parsePostfix() {
    int first = pos_;
    Node *e = parsePrimary();
    while (true) {
      if (isPunct(".") || isPunct("->")) {
        bool arrow = isPunct("->");
        SourceLocation op_loc = cur().range.begin;
        ++pos_;
        const Token &name = expectIdent("member name");
        if (isPunct("(")) {
          Node *m = begin(NodeKind::MethodCall, first);
          m->name = name.text;
          m->name_loc = name.range.begin;
          m->op_loc = op_loc;
          m->is_arrow = arrow;
          attach(m, e);
          parseArgs(m);
          e = finish(m);
        } else {
          Node *f = begin(NodeKind::FieldAccess, first);
          f->name = name.text;
          f->name_loc = name.range.begin;
          f->op_loc = op_loc;
          f->is_arrow = arrow;
          attach(f, e);
          e = finish(f);
        }
        continue;
      }
      return e;
    }
  }

  void parseArgs(Node *call) {
    expectPunct("(");
    if (!isPunct(")")) {
      while (true) {
        attach(call, parseAssignment());
        if (!acceptPunct(","))
          break;
      }
    }
    expectPunct(")");
  }

  Node *parsePrimary() {
    int first = pos_;
    const Token &t = cur();
    if (t.kind == TokenKind::Literal) {
      ++pos_;
      if (t.text[0] == '"') {
        Node *n = begin(NodeKind::StringLit, first);
        n->str_value = decodeQuoted(t);
        return finish(n);
      }
      Node *n = begin(NodeKind::IntLit, first);
      if (t.text[0] == '\'') {
        std::string v = decodeQuoted(t);
        if (v.size() != 1)
          throw SyntaxError(t.range.begin, "invalid character literal");
        n->int_value = static_cast<unsigned char>(v[0]);
        n->is_char_literal = true;
      } else {
        std::int64_t v = 0;
        auto [ptr, ec] =
            std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc())
          throw SyntaxError(t.range.begin, "integer literal is too large");
        n->int_value = v;
      }
      return finish(n);
    }
    if (t.isKeyword("true") || t.isKeyword("false")) {
      ++pos_;
      Node *n = begin(NodeKind::BoolLit, first);
      n->int_value = t.text == "true";
      return finish(n);
    }
    if (t.isKeyword("new")) {
      ++pos_;
      Node *n = begin(NodeKind::NewExpr, first);
      TypeRef allocated = parseType();
      n->type = allocated.addPointer();
      expectPunct("(");
      expectPunct(")");
      return finish(n);
    }
    if (t.kind == TokenKind::Identifier) {
      ++pos_;
      if (isPunct("(")) {
        Node *c = begin(NodeKind::Call, first);
        c->name = t.text;
        c->name_loc = t.range.begin;
        parseArgs(c);
        return finish(c);
      }
      Node *n = begin(NodeKind::DeclRef, first);
      n->name = t.text;
      n->name_loc = t.range.begin;
      return finish(n);
    }
    if (t.isPunct("(")) {
      ++pos_;
      Node *p = begin(NodeKind::Paren, first);
      attach(p, parseExpr());
      expectPunct(")");
      return finish(p);
    }
    fail("expected expression before " + describeCur());
  }

  static std::string decodeQuoted(const Token &t) {
    std::string out;
    const std::string &s = t.text;
    for (size_t i = 1; i + 1 < s.size(); ++i) {
      char c = s[i];
      if (c == '\\' && i + 2 < s.size()) {
        char e = s[++i];
        switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '0': out += '\0'; break;
        default: out += e; break;
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  const std::vector<Token> &toks_;
  const SourceFile &file_;
  ParseOptions opts_;
  ParseResult result_;
  int pos_ = 0;
  std::set<std::string> structs_;
};

} // namespace

ParseResult parse(const std::vector<Token> &tokens, const SourceFile &file,
                  const ParseOptions &opts) {
  if (tokens.empty() || tokens.back().kind != TokenKind::EndOfFile)
    throw std::invalid_argument("token stream must end with EndOfFile");
  return Parser(tokens, file, opts).run();
}

} // namespace minisa
