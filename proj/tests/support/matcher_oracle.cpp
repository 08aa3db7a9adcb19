#include "matcher_oracle.h"

#include <functional>
#include <map>

namespace minisa::oracle {

namespace {

using K = NodeKind;
using KindList = std::vector<NodeKind>;

const std::vector<std::pair<std::string, KindList>> &nodeTable() {
  static const std::vector<std::pair<std::string, KindList>> t = {
      {"varDecl", {K::VarDecl}},
      {"declRefExpr", {K::DeclRef}},
      {"binaryOperator", {K::BinaryOp, K::Assign}},
      {"unaryOperator", {K::UnaryOp}},
      {"ifStmt", {K::IfStmt}},
      {"returnStmt", {K::ReturnStmt}},
      {"callExpr", {K::Call}},
      {"compoundStmt", {K::Block}},
      {"functionDecl", {K::FunctionDecl, K::ExternDecl}},
      {"expr",
       {K::IntLit, K::BoolLit, K::StringLit, K::DeclRef, K::UnaryOp,
        K::BinaryOp, K::Assign, K::FieldAccess, K::MethodCall, K::Call,
        K::NewExpr, K::AddressOf, K::Paren}},
      {"stmt",
       {K::Block, K::IfStmt, K::WhileStmt, K::ReturnStmt, K::BreakStmt,
        K::ContinueStmt, K::DeleteStmt, K::ExprStmt, K::IntLit, K::BoolLit,
        K::StringLit, K::DeclRef, K::UnaryOp, K::BinaryOp, K::Assign,
        K::FieldAccess, K::MethodCall, K::Call, K::NewExpr, K::AddressOf,
        K::Paren}},
  };
  return t;
}

const KindList &kindsFor(const std::string &name) {
  for (const auto &[n, ks] : nodeTable())
    if (n == name)
      return ks;
  static const KindList empty;
  return empty;
}

const KindList kDeclKinds = {K::StructDecl, K::FieldDecl, K::FunctionDecl,
                             K::ExternDecl, K::ParamDecl, K::VarDecl};
const KindList kOpKinds = {K::UnaryOp, K::BinaryOp, K::Assign};

bool in(const KindList &ks, NodeKind k) {
  for (auto x : ks)
    if (x == k)
      return true;
  return false;
}

std::vector<const Node *> allNodes(const Node *root) {
  std::vector<const Node *> out;
  std::function<void(const Node *)> walk = [&](const Node *n) {
    out.push_back(n);
    for (const Node *c : n->children)
      walk(c);
  };
  walk(root);
  return out;
}

using NodeSet = std::set<const Node *>;

NodeSet domainOf(const MatcherSpec &s, const std::vector<const Node *> &all) {
  NodeSet out;
  switch (s.op) {
  case MatcherSpec::Op::Node: {
    out = {};
    for (const Node *n : all)
      if (in(kindsFor(s.text), n->kind))
        out.insert(n);
    for (const auto &k : s.kids) {
      NodeSet d = domainOf(*k, all), keep;
      for (const Node *n : out)
        if (d.count(n))
          keep.insert(n);
      out = keep;
    }
    return out;
  }
  case MatcherSpec::Op::HasName:
    for (const Node *n : all)
      if (in(kDeclKinds, n->kind))
        out.insert(n);
    return out;
  case MatcherSpec::Op::HasOperatorName:
    for (const Node *n : all)
      if (in(kOpKinds, n->kind))
        out.insert(n);
    return out;
  case MatcherSpec::Op::AnyOf:
    for (const auto &k : s.kids)
      for (const Node *n : domainOf(*k, all))
        out.insert(n);
    return out;
  case MatcherSpec::Op::AllOf: {
    out.insert(all.begin(), all.end());
    for (const auto &k : s.kids) {
      NodeSet d = domainOf(*k, all), keep;
      for (const Node *n : out)
        if (d.count(n))
          keep.insert(n);
      out = keep;
    }
    return out;
  }
  case MatcherSpec::Op::Unless:
    return domainOf(*s.kids[0], all);
  default:
    out.insert(all.begin(), all.end());
    return out;
  }
}

NodeSet sat(const MatcherSpec &s, const std::vector<const Node *> &all) {
  NodeSet out;
  switch (s.op) {
  case MatcherSpec::Op::Node:
  case MatcherSpec::Op::AllOf: {
    if (s.op == MatcherSpec::Op::Node) {
      for (const Node *n : all)
        if (in(kindsFor(s.text), n->kind))
          out.insert(n);
    } else {
      out.insert(all.begin(), all.end());
    }
    for (const auto &k : s.kids) {
      NodeSet ks = sat(*k, all), keep;
      for (const Node *n : out)
        if (ks.count(n))
          keep.insert(n);
      out = keep;
    }
    return out;
  }
  case MatcherSpec::Op::HasName:
    for (const Node *n : all)
      if (in(kDeclKinds, n->kind) && n->name == s.text)
        out.insert(n);
    return out;
  case MatcherSpec::Op::HasOperatorName:
    for (const Node *n : all)
      if (in(kOpKinds, n->kind) && n->op == s.text)
        out.insert(n);
    return out;
  case MatcherSpec::Op::AnyOf:
    for (const auto &k : s.kids)
      for (const Node *n : sat(*k, all))
        out.insert(n);
    return out;
  case MatcherSpec::Op::Unless: {
    NodeSet d = domainOf(*s.kids[0], all), m = sat(*s.kids[0], all);
    for (const Node *n : d)
      if (!m.count(n))
        out.insert(n);
    return out;
  }
  case MatcherSpec::Op::Has: {
    NodeSet m = sat(*s.kids[0], all);
    for (const Node *n : all)
      for (const Node *c : n->children)
        if (m.count(c))
          out.insert(n);
    return out;
  }
  case MatcherSpec::Op::HasDescendant: {
    NodeSet m = sat(*s.kids[0], all);
    for (const Node *n : all) {
      // Naive: walk every strict descendant.
      std::vector<const Node *> stack(n->children.begin(), n->children.end());
      while (!stack.empty()) {
        const Node *d = stack.back();
        stack.pop_back();
        if (m.count(d)) {
          out.insert(n);
          break;
        }
        stack.insert(stack.end(), d->children.begin(), d->children.end());
      }
    }
    return out;
  }
  case MatcherSpec::Op::HasParent: {
    NodeSet m = sat(*s.kids[0], all);
    for (const Node *n : all)
      if (n->parent && m.count(n->parent))
        out.insert(n);
    return out;
  }
  }
  return out;
}

const std::vector<std::string> kNames = {"x", "y", "p", "f", "g", "a"};
const std::vector<std::string> kOps = {"+", "-", "*", "==", "<", "!", "=", "&&"};

} // namespace

SpecPtr randomSpec(std::mt19937 &rng, int depth) {
  auto s = std::make_shared<MatcherSpec>();
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  int choice = depth <= 0 ? pick(3) : pick(10);
  switch (choice) {
  case 0: {
    s->op = MatcherSpec::Op::Node;
    s->text = nodeTable()[pick(static_cast<int>(nodeTable().size()))].first;
    break;
  }
  case 1:
    s->op = MatcherSpec::Op::HasName;
    s->text = kNames[pick(static_cast<int>(kNames.size()))];
    break;
  case 2:
    s->op = MatcherSpec::Op::HasOperatorName;
    s->text = kOps[pick(static_cast<int>(kOps.size()))];
    break;
  case 3:
  case 4: {
    s->op = MatcherSpec::Op::Node;
    s->text = nodeTable()[pick(static_cast<int>(nodeTable().size()))].first;
    int n = 1 + pick(2);
    for (int i = 0; i < n; ++i)
      s->kids.push_back(randomSpec(rng, depth - 1));
    break;
  }
  case 5:
  case 6: {
    s->op = choice == 5 ? MatcherSpec::Op::AnyOf : MatcherSpec::Op::AllOf;
    int n = 1 + pick(3);
    for (int i = 0; i < n; ++i)
      s->kids.push_back(randomSpec(rng, depth - 1));
    break;
  }
  case 7:
    s->op = MatcherSpec::Op::Unless;
    s->kids.push_back(randomSpec(rng, depth - 1));
    break;
  default: {
    static const MatcherSpec::Op trav[] = {MatcherSpec::Op::Has,
                                           MatcherSpec::Op::HasDescendant,
                                           MatcherSpec::Op::HasParent};
    s->op = trav[pick(3)];
    s->kids.push_back(randomSpec(rng, depth - 1));
    break;
  }
  }
  if (pick(4) == 0)
    s->bind_label = "b" + std::to_string(pick(3));
  return s;
}

std::string describe(const MatcherSpec &s) {
  std::string head;
  switch (s.op) {
  case MatcherSpec::Op::Node: head = s.text; break;
  case MatcherSpec::Op::HasName: head = "hasName(\"" + s.text + "\""; break;
  case MatcherSpec::Op::HasOperatorName:
    head = "hasOperatorName(\"" + s.text + "\"";
    break;
  case MatcherSpec::Op::AnyOf: head = "anyOf"; break;
  case MatcherSpec::Op::AllOf: head = "allOf"; break;
  case MatcherSpec::Op::Unless: head = "unless"; break;
  case MatcherSpec::Op::Has: head = "has"; break;
  case MatcherSpec::Op::HasDescendant: head = "hasDescendant"; break;
  case MatcherSpec::Op::HasParent: head = "hasParent"; break;
  }
  std::string out = head;
  if (s.op == MatcherSpec::Op::HasName || s.op == MatcherSpec::Op::HasOperatorName) {
    out += ")";
  } else {
    out += "(";
    for (size_t i = 0; i < s.kids.size(); ++i)
      out += (i ? ", " : "") + describe(*s.kids[i]);
    out += ")";
  }
  if (!s.bind_label.empty())
    out += ".bind(\"" + s.bind_label + "\")";
  return out;
}

match::Matcher buildFromSpec(const MatcherSpec &s) {
  std::vector<match::MatcherArg> args;
  std::string ctor;
  switch (s.op) {
  case MatcherSpec::Op::Node: ctor = s.text; break;
  case MatcherSpec::Op::HasName: ctor = "hasName"; args.push_back(s.text); break;
  case MatcherSpec::Op::HasOperatorName:
    ctor = "hasOperatorName";
    args.push_back(s.text);
    break;
  case MatcherSpec::Op::AnyOf: ctor = "anyOf"; break;
  case MatcherSpec::Op::AllOf: ctor = "allOf"; break;
  case MatcherSpec::Op::Unless: ctor = "unless"; break;
  case MatcherSpec::Op::Has: ctor = "has"; break;
  case MatcherSpec::Op::HasDescendant: ctor = "hasDescendant"; break;
  case MatcherSpec::Op::HasParent: ctor = "hasParent"; break;
  }
  for (const auto &k : s.kids)
    args.push_back(buildFromSpec(*k));
  match::Matcher m = match::buildMatcher(ctor, args);
  if (!s.bind_label.empty())
    m = m.bind(s.bind_label);
  return m;
}

std::set<const Node *> oracleRoots(const MatcherSpec &s, const Node *tree_root) {
  auto all = allNodes(tree_root);
  return sat(s, all);
}

std::string randomProgram(std::mt19937 &rng) {
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  std::string out = "struct S{int v;};\nextern int g(int a);\nextern S* p();\n";
  const char *vars[] = {"x", "y", "a"};
  std::function<std::string(int)> expr = [&](int d) -> std::string {
    int c = d <= 0 ? pick(3) : pick(8);
    switch (c) {
    case 0: return std::to_string(pick(5));
    case 1:
    case 2: return vars[pick(3)];
    case 3: return "(" + expr(d - 1) + ")";
    case 4: return "-" + expr(d - 1);
    case 5: return "g(" + expr(d - 1) + ")";
    case 6: return expr(d - 1) + " * " + expr(d - 1);
    default: return expr(d - 1) + " + " + expr(d - 1);
    }
  };
  auto cond = [&]() -> std::string {
    switch (pick(4)) {
    case 0: return expr(1) + " == " + expr(1);
    case 1: return "!(" + expr(1) + " < " + expr(1) + ")";
    case 2: return expr(1) + " < " + expr(1) + " && " + expr(0) + " == 1";
    default: return "p() == 0";
    }
  };
  std::function<std::string(int)> stmt = [&](int d) -> std::string {
    int c = d <= 0 ? pick(3) : pick(6);
    switch (c) {
    case 0: return "x = " + expr(2) + ";";
    case 1: return "y = " + expr(2) + ";";
    case 2: return "g(" + expr(1) + ");";
    case 3: return "if (" + cond() + ") " + stmt(d - 1) +
                   (pick(2) ? " else " + stmt(d - 1) : "");
    case 4: return "{ " + stmt(d - 1) + " " + stmt(d - 1) + " }";
    default: return "if (" + cond() + ") return " + expr(1) + ";";
    }
  };
  int fns = 1 + pick(2);
  for (int i = 0; i < fns; ++i) {
    out += "int f" + std::to_string(i) + "(int a) {\n  int x = a;\n  int y = a + 1;\n";
    int n = 1 + pick(4);
    for (int k = 0; k < n; ++k)
      out += "  " + stmt(2) + "\n";
    out += "  return x;\n}\n";
  }
  return out;
}

} // namespace minisa::oracle
