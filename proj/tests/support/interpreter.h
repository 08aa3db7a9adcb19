#pragma once

// Concrete big-step interpreter for MiniLang, used as an oracle. Integers
// wrap at 64 bits. Strings and methods are not modelled.

#include "minisa/frontend/frontend.h"

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace minisa::oracle {

struct CValue {
  enum class Kind { Undef, Int, Ptr, Obj };
  Kind kind = Kind::Undef;
  int64_t i = 0;
  CValue *ptr = nullptr;                       // Ptr; null pointer when nullptr
  std::map<std::string, CValue> *fields = nullptr; // Obj

  static CValue integer(int64_t v) {
    CValue c;
    c.kind = Kind::Int;
    c.i = v;
    return c;
  }
  static CValue pointer(CValue *p) {
    CValue c;
    c.kind = Kind::Ptr;
    c.ptr = p;
    return c;
  }
  static CValue null() { return pointer(nullptr); }
  bool isNull() const { return kind == Kind::Ptr && !ptr; }
};

struct Decision {
  int node_id = -1;
  bool truth = false;
  auto operator<=>(const Decision &) const = default;
};

struct ExecError : std::runtime_error {
  explicit ExecError(const std::string &msg, const Node *at = nullptr)
      : std::runtime_error(msg), node(at) {}
  const Node *node; // offending expression, when known
};

struct RunResult {
  std::optional<CValue> ret;
  bool return_taken = false; // some return statement executed
  std::vector<Decision> decisions;
};

class Interpreter {
public:
  using ExternFn = std::function<CValue(Interpreter &, const std::vector<CValue> &)>;

  explicit Interpreter(const Unit &unit) : unit_(unit) {}

  void setExtern(const std::string &name, ExternFn fn) { externs_[name] = std::move(fn); }
  /// Fresh heap cell of `type`; structs get undefined fields.
  CValue *allocate(const TypeRef &type);

  /// Throws ExecError on undefined behaviour or unsupported constructs.
  RunResult call(const std::string &fn, const std::vector<CValue> &args);

  int max_steps = 200000;

private:
  struct Frame {
    std::map<const Node *, CValue *> vars; // decl -> cell (aliases for references)
    RunResult *result = nullptr;
  };
  enum class Flow { Normal, Return, Break, Continue };

  CValue invoke(const Node *fn, const std::vector<CValue> &args, const std::vector<CValue *> &refs,
                RunResult &res, int depth);
  Flow exec(const Node *s, Frame &f, CValue &ret);
  CValue *lvalue(const Node *e, Frame &f);
  CValue rvalue(const Node *e, Frame &f);
  bool cond(const Node *e, Frame &f);
  CValue callExpr(const Node *e, Frame &f);
  CValue *cell(const TypeRef &type);
  void tick();

  const Unit &unit_;
  std::map<std::string, ExternFn> externs_;
  std::deque<CValue> cells_;
  std::deque<std::map<std::string, CValue>> objects_;
  int steps_ = 0;
  int depth_ = 0;
};

} // namespace minisa::oracle
