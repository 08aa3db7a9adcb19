#pragma once

#include "minisa/frontend/ast.h"

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace minisa::sym {

using SymbolId = int;

struct Symbol {
  enum class Kind { Param, RefParam, Conjured, Derived };
  SymbolId id = 0;
  Kind kind = Kind::Conjured;
  std::string name; // `$b`, `$conj3`
  TypeRef type;
  const Node *origin = nullptr;
};

/// Owns the symbols of one top-level analysis. Ids are never reused.
class SymbolManager {
public:
  SymbolId conjure(const TypeRef &type, const Node *origin);
  SymbolId param(const Node *param_decl);
  SymbolId refParam(const Node *param_decl);
  /// Memoized per key so repeated reads of the same unknown storage agree.
  SymbolId derived(const std::string &key, const TypeRef &type);

  const Symbol &get(SymbolId id) const { return syms_.at(id); }
  size_t size() const { return syms_.size(); }

private:
  SymbolId add(Symbol s);
  std::vector<Symbol> syms_;
  std::map<std::string, SymbolId> derived_;
};

struct SymExpr;
using SymExprRef = std::shared_ptr<const SymExpr>;

/// Sym, SymIntOp(lhs, op, constant) or Const. The left operand of an
/// IntOp is never Const: arithmetic on constants folds.
struct SymExpr {
  enum class Kind { Sym, IntOp, Const };
  Kind kind = Kind::Const;
  SymbolId sym = -1;
  SymExprRef lhs;
  char op = 0; // + - *
  int64_t value = 0;

  static SymExprRef symbol(SymbolId s);
  static SymExprRef constant(int64_t v);
  /// Folds `(s + a) + b` and `x - c`; may return a Const.
  static SymExprRef binop(const SymExprRef &lhs, char op, int64_t c);

  /// `s` or `s + c` as (s, c); nullopt for other shapes.
  std::optional<std::pair<SymbolId, int64_t>> linear() const;
  void collect(std::set<SymbolId> &out) const;
  std::string str(const SymbolManager &sm) const;
  bool equals(const SymExpr &o) const;
};

struct MemRegion {
  enum class Kind { Var, Field, Heap, Symbolic };
  Kind kind = Kind::Var;
  int id = 0;
  const Node *decl = nullptr; // Var
  int frame = 0;              // Var
  const MemRegion *parent = nullptr; // Field
  std::string field;                 // Field
  SymbolId sym = -1;                 // Heap, Symbolic
  TypeRef type;                      // type of the stored value
  std::string display;               // Symbolic regions standing for a reference param

  bool isSubRegionOf(const MemRegion *r) const;
  const MemRegion *base() const;
  std::string name(const SymbolManager &sm) const;
};

struct RegionLess {
  bool operator()(const MemRegion *a, const MemRegion *b) const { return a->id < b->id; }
};

/// Interns regions so pointer identity is structural identity.
class RegionManager {
public:
  const MemRegion *var(const Node *decl, int frame);
  const MemRegion *field(const MemRegion *parent, const std::string &name,
                         const TypeRef &type);
  const MemRegion *heap(SymbolId handle, const TypeRef &type);
  const MemRegion *symbolic(SymbolId sym, const TypeRef &pointee,
                            std::string display = {});

private:
  const MemRegion *intern(std::tuple<int, const void *, int, std::string> key, MemRegion r);
  std::deque<MemRegion> regions_;
  std::map<std::tuple<int, const void *, int, std::string>, const MemRegion *> index_;
};

struct SVal {
  enum class Kind { Undefined, Unknown, Int, Sym, Loc, Null, Cond };
  Kind kind = Kind::Unknown;
  int64_t i = 0;                    // Int; Cond right-hand constant
  SymExprRef sym;                   // Sym; Cond left-hand side
  const MemRegion *region = nullptr; // Loc
  std::string op;                   // Cond

  static SVal undefined() { return make(Kind::Undefined); }
  static SVal unknown() { return make(Kind::Unknown); }
  static SVal integer(int64_t v);
  static SVal symbolic(SymExprRef e); // folds Const to Int
  static SVal loc(const MemRegion *r);
  static SVal null() { return make(Kind::Null); }
  static SVal cond(SymExprRef lhs, std::string op, int64_t rhs);

  bool isUnknownOrUndef() const { return kind == Kind::Unknown || kind == Kind::Undefined; }
  /// The tracked symbol of a pointer-like or plain symbolic value.
  std::optional<SymbolId> asSymbol() const;
  void collect(std::set<SymbolId> &syms, std::set<const MemRegion *> &regions) const;
  std::string str(const SymbolManager &sm) const;
  bool operator==(const SVal &o) const;
  bool operator!=(const SVal &o) const { return !(*this == o); }

private:
  static SVal make(Kind k) {
    SVal v;
    v.kind = k;
    return v;
  }
};

/// Negation of a comparison operator (`<` -> `>=`).
std::string negateOp(const std::string &op);
/// Operator with swapped operands (`<` -> `>`).
std::string flipOp(const std::string &op);
int64_t wrapArith(int64_t a, char op, int64_t b);

} // namespace minisa::sym
