#pragma once

#include "minisa/frontend/ast.h"
#include "minisa/frontend/source.h"

#include <string>
#include <variant>
#include <vector>

namespace minisa {

enum class Severity { Warning, Note };

struct FixIt {
  enum class Kind { Insertion, Replacement, Removal };
  Kind kind = Kind::Replacement;
  SourceRange range; // insertion: begin == end
  std::string text;

  static FixIt insertion(SourceLocation loc, std::string text);
  static FixIt replacement(SourceRange range, std::string text);
  static FixIt removal(SourceRange range);
};

struct Diagnostic {
  SourceLocation location;
  std::string message;
  Severity severity = Severity::Warning;
  std::string check_name;
  std::vector<FixIt> fixits;
  std::vector<Diagnostic> notes;
  /// Diagnostics sharing a group are applied (or skipped) together.
  int group = -1;
};

/// `%k` placeholder argument. A node renders as its quoted declared name.
using DiagArg = std::variant<std::string, const Node *>;

/// Throws std::logic_error if a placeholder has no matching argument.
Diagnostic emitDiag(SourceLocation loc, const std::string &tmpl,
                    const std::vector<DiagArg> &args, Severity severity,
                    std::string check_name = {});

/// `file:line:col: severity: message [check]`, source line, caret, and the
/// text of fix-its that start on that line.
std::string renderDiagnostic(const Diagnostic &d, const SourceFile &file,
                             bool with_notes = true);

struct FixResult {
  std::string text;
  std::vector<std::string> tool_warnings;
  int applied_groups = 0;
};

/// Applies all fix-its right to left. A group whose edits overlap an
/// already accepted edit is skipped as a whole.
FixResult applyFixes(const std::string &source,
                     const std::vector<Diagnostic> &diagnostics);

} // namespace minisa
