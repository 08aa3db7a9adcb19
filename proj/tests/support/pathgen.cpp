#include "pathgen.h"

#include "interpreter.h"

#include "minisa/frontend/frontend.h"
#include "minisa/symexec/engine.h"
#include "minisa/symexec/rangeset.h"
#include "minisa/symexec/svals.h"

#include <algorithm>
#include <sstream>

namespace minisa::oracle {

namespace {

// A readable local: either a constant or `param + offset`.
struct Var {
  std::string name;
  std::string param; // empty for constants
  int64_t offset = 0;
  bool flag = false; // 0/1 result of a logical operator
};

class Gen {
public:
  explicit Gen(std::mt19937_64 &rng, int max_ifs) : rng_(rng), ifs_left_(max_ifs) {}

  BranchProgram run() {
    std::vector<Var> scope = {{"a", "a", 0}, {"b", "b", 0}};
    out_ << "int f(int a, int b) {\n  int r = 0;\n";
    block(scope, 1);
    out_ << "  return r;\n}\n";
    prog_.source = out_.str();
    return prog_;
  }

private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(int pct) { return pick(1, 100) <= pct; }
  void indent(int d) { out_ << std::string(2 * d, ' '); }

  static std::string lit(int64_t v) { return v < 0 ? "-" + std::to_string(-v) : std::to_string(v); }

  void declare(std::vector<Var> &scope, int d) {
    Var v;
    v.name = "t" + std::to_string(next_local_++);
    indent(d);
    if (coin(15)) {
      // Value-context logical operator; the result is 0 or 1.
      out_ << "bool " << v.name << " = " << atom(scope) << (coin(50) ? " && " : " || ")
           << atom(scope) << ";\n";
      v.flag = true;
    } else if (coin(25)) {
      v.offset = pick(-9, 9);
      out_ << "int " << v.name << " = " << lit(v.offset) << ";\n";
    } else {
      const Var *pb = &scope[pick(0, (int)scope.size() - 1)];
      while (pb->flag)
        pb = &scope[pick(0, (int)scope.size() - 1)];
      const Var &base = *pb;
      int64_t k = pick(-5, 5);
      v.param = base.param;
      v.offset = base.offset + k;
      out_ << "int " << v.name << " = " << base.name << (k < 0 ? " - " : " + ")
           << (k < 0 ? -k : k) << ";\n";
    }
    scope.push_back(v);
  }

  std::string atom(const std::vector<Var> &scope) {
    static const char *kOps[] = {"<", "<=", ">", ">=", "==", "!="};
    const Var &v = scope[pick(0, (int)scope.size() - 1)];
    if (v.flag)
      return coin(50) ? v.name : "!" + v.name;
    int64_t c = coin(40) ? pick(-4, 4) : 0;
    int64_t k = pick(-12, 12);
    std::string lhs = v.name;
    if (c > 0)
      lhs += " + " + std::to_string(c);
    else if (c < 0)
      lhs += " - " + std::to_string(-c);
    if (!v.param.empty()) {
      int64_t off = v.offset + c;
      auto &bs = prog_.boundaries[v.param];
      bs.insert(sym::wrapArith(k, '-', off));
      bs.insert(sym::wrapArith(sym::kIMin, '-', off));
    }
    std::string s = lhs + " " + kOps[pick(0, 5)] + " " + lit(k);
    return coin(15) ? "(" + s + ")" : s;
  }

  std::string cond(const std::vector<Var> &scope, int depth) {
    int r = depth >= 2 ? 0 : pick(0, 9);
    if (r <= 4)
      return atom(scope);
    if (r == 5)
      return "!(" + cond(scope, depth + 1) + ")";
    std::string op = r <= 7 ? " && " : " || ";
    std::string s = cond(scope, depth + 1) + op + cond(scope, depth + 1);
    return depth > 0 ? "(" + s + ")" : s;
  }

  void leafStmt(int d) {
    indent(d);
    if (coin(30))
      out_ << "return " << lit(pick(-50, 50)) << ";\n";
    else
      out_ << "r = " << lit(pick(-50, 50)) << ";\n";
  }

  void block(std::vector<Var> scope, int d) {
    int stmts = d == 1 ? pick(2, 4) : pick(1, 3);
    for (int i = 0; i < stmts; ++i) {
      if (coin(40))
        declare(scope, d);
      if (ifs_left_ > 0 && coin(80)) {
        --ifs_left_;
        ++prog_.ifs;
        indent(d);
        out_ << "if (" << cond(scope, 0) << ") {\n";
        branchBody(scope, d + 1);
        indent(d);
        out_ << "}";
        if (coin(50)) {
          out_ << " else {\n";
          branchBody(scope, d + 1);
          indent(d);
          out_ << "}";
        }
        out_ << "\n";
      } else {
        leafStmt(d);
      }
    }
  }

  void branchBody(const std::vector<Var> &scope, int d) {
    if (ifs_left_ > 0 && coin(40))
      block(scope, d);
    else
      leafStmt(d);
  }

  std::mt19937_64 &rng_;
  int ifs_left_;
  int next_local_ = 0;
  std::ostringstream out_;
  BranchProgram prog_;
};

using Decisions = std::vector<Decision>;

std::string show(const Decisions &ds) {
  std::string s;
  for (const Decision &d : ds)
    s += std::to_string(d.node_id) + (d.truth ? "T " : "F ");
  return s.empty() ? "<none>" : s;
}

// Branch decisions along the first-predecessor chain, oldest first.
Decisions leafDecisions(const sym::ExplodedNode *leaf) {
  Decisions out;
  for (const sym::ExplodedNode *n = leaf; n; n = n->firstPred()) {
    const sym::ProgramPoint &pp = n->point;
    if (pp.kind != sym::ProgramPoint::Kind::BlockEdge || !pp.frame || !pp.frame->cfg)
      continue;
    const cfg::Terminator &t = pp.frame->cfg->blocks.at(pp.from).term;
    if (t.kind != cfg::Terminator::Kind::Branch || !t.cond)
      continue;
    out.push_back({t.cond->id, pp.to == t.true_target});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

} // namespace

BranchProgram randomBranchProgram(std::mt19937_64 &rng, int max_ifs) {
  return Gen(rng, max_ifs).run();
}

std::vector<int64_t> candidateValues(const std::set<int64_t> &boundaries) {
  std::set<int64_t> out = {sym::kIMin, sym::kIMin + 1, sym::kIMax - 1, sym::kIMax, -1, 0, 1};
  for (int64_t b : boundaries)
    for (int64_t d : {-1, 0, 1})
      out.insert(sym::wrapArith(b, '+', d));
  return {out.begin(), out.end()};
}

SoundnessResult checkSoundness(const BranchProgram &p) {
  SoundnessResult res;
  auto unit = loadUnit("gen.mc", p.source);
  if (!unit->ok()) {
    res.detail = "frontend rejected generated program:\n" + formatFrontendErrors(*unit);
    return res;
  }
  const Node *fn = nullptr;
  for (const Node *d : unit->root()->children)
    if (d->kind == NodeKind::FunctionDecl && d->name == "f")
      fn = d;
  auto params = functionParams(fn);

  sym::Engine eng(*unit);
  sym::AnalysisResult ar = eng.runFunction("f");
  const sym::ExplodedGraph *g = ar.graphFor("f");
  if (!g || g->budgetExhausted()) {
    res.detail = "engine produced no complete graph";
    return res;
  }

  std::set<Decisions> engine_paths;
  for (const sym::ExplodedNode *leaf : g->leaves()) {
    ++res.leaves;
    Decisions want = leafDecisions(leaf);
    engine_paths.insert(want);
    std::vector<CValue> args;
    for (const Node *param : params) {
      int64_t v = 0;
      for (size_t s = 0; s < g->symbols.size(); ++s) {
        const sym::Symbol &sy = g->symbols.get((sym::SymbolId)s);
        if (sy.kind == sym::Symbol::Kind::Param && sy.origin == param)
          v = leaf->state.rangeOf(sy.id).smallestMagnitude().value_or(0);
      }
      args.push_back(CValue::integer(v));
    }
    try {
      Interpreter in(*unit);
      RunResult rr = in.call("f", args);
      if (rr.decisions != want) {
        res.detail = "witness (" + std::to_string(args[0].i) + ", " + std::to_string(args[1].i) +
                     ") took " + show(rr.decisions) + " but leaf recorded " + show(want);
        return res;
      }
    } catch (const ExecError &e) {
      res.detail = std::string("interpreter failed on witness: ") + e.what();
      return res;
    }
  }

  std::set<Decisions> concrete;
  auto as = candidateValues(p.boundaries.count("a") ? p.boundaries.at("a") : std::set<int64_t>{});
  auto bs = candidateValues(p.boundaries.count("b") ? p.boundaries.at("b") : std::set<int64_t>{});
  Interpreter in(*unit);
  for (int64_t a : as)
    for (int64_t b : bs)
      concrete.insert(in.call("f", {CValue::integer(a), CValue::integer(b)}).decisions);
  res.paths = (int)concrete.size();

  if (res.leaves != res.paths || engine_paths != concrete) {
    res.detail = "engine found " + std::to_string(res.leaves) + " feasible leaves, interpreter " +
                 std::to_string(res.paths) + " paths";
    for (const Decisions &d : concrete)
      if (!engine_paths.count(d))
        res.detail += "\n  missed by engine: " + show(d);
    for (const Decisions &d : engine_paths)
      if (!concrete.count(d))
        res.detail += "\n  not reproduced: " + show(d);
    return res;
  }
  res.ok = true;
  return res;
}

} // namespace minisa::oracle
