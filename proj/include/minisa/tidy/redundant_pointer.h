#pragma once

#include "minisa/frontend/frontend.h"
#include "minisa/matchers/matchers.h"
#include "minisa/tidy/diagnostic.h"

#include <map>
#include <vector>

namespace minisa::tidy {

inline constexpr const char *kRedundantPointerCheck = "readability-redundant-pointer";

struct VarUsage {
  enum class Kind { Normal, Dereference, DerefInit, Guard };
  Kind kind = Kind::Normal;
  const Node *decl_ref = nullptr;
  const Node *deref_expr = nullptr; // Dereference, DerefInit
  const Node *inited_var = nullptr; // DerefInit
  const Node *guard_if = nullptr;   // Guard
  const Node *flow_stmt = nullptr;  // Guard
};

const char *usageKindName(VarUsage::Kind k);

struct TrackedPointer {
  const Node *var = nullptr;
  const Node *init = nullptr; // Π
  std::vector<VarUsage> usages; // ordered by decl_ref offset
};

struct UsageLedger {
  std::map<NodeId, TrackedPointer> vars; // keyed by VarDecl id

  /// Appends, or upgrades an existing record for the same decl_ref when the
  /// new kind is more specialised.
  void addUsage(const Node *var, const VarUsage &usage);
  const TrackedPointer *find(const Node *var) const;
};

/// The shared sub-matchers, exposed for testing.
struct PointerMatchers {
  match::Matcher pointer_var;
  match::Matcher var_usage;
  match::Matcher dereference;
  match::Matcher var_init_from_dereference;
  match::Matcher flow_breaking;
  match::Matcher guard;
};
PointerMatchers buildPointerMatchers();

class RedundantPointerCheck {
public:
  explicit RedundantPointerCheck(const Unit &unit, int std_mode = 14)
      : unit_(unit), std_mode_(std_mode) {}

  void registerMatchers(match::MatchFinder &finder);
  void check(const match::MatchResult &result);
  std::vector<Diagnostic> onEndOfTranslationUnit();

  const UsageLedger &ledger() const { return ledger_; }
  int callbackCount() const { return callbacks_; }

private:
  void diagnoseSingleUse(const TrackedPointer &tp, std::vector<Diagnostic> &out);
  void diagnoseGuarded(const TrackedPointer &tp, const VarUsage &g,
                       const VarUsage &u, std::vector<Diagnostic> &out);

  const Unit &unit_;
  int std_mode_;
  UsageLedger ledger_;
  int callbacks_ = 0;
  int next_group_ = 0;
};

/// Runs the check over `unit` and returns its diagnostics, sorted.
std::vector<Diagnostic> runRedundantPointerCheck(const Unit &unit, int std_mode);

} // namespace minisa::tidy
