#pragma once

#include "minisa/symexec/engine.h"
#include "minisa/tidy/diagnostic.h"

#include <stdexcept>
#include <string>
#include <vector>

namespace minisa::report {

struct BugPath {
  const sym::BugReport *report = nullptr;
  std::vector<sym::PathPiece> pieces; // chronological, FinalWarning last
};

/// Walks first predecessors back from the error node. Each visitor
/// contributes at most one piece. Throws std::logic_error when the error
/// node does not belong to the report's graph.
BugPath assembleBugPath(const sym::BugReport &r);

struct TextOptions {
  bool duplicate_warning_note = true;
};

/// One warning per path with its events (and the duplicate note) attached.
Diagnostic toDiagnostic(const BugPath &p, const TextOptions &opts = {});

/// Rendered diagnostics followed by `Found N defect(s) in <file>`.
std::string renderText(const std::vector<BugPath> &paths, const SourceFile &file,
                       const TextOptions &opts = {});

struct FileReport {
  const SourceFile *file = nullptr;
  std::vector<BugPath> paths;
};

/// One self-contained HTML page covering every file.
std::string renderHtml(const std::vector<FileReport> &files, const TextOptions &opts = {});
std::string renderHtml(const std::vector<BugPath> &paths, const SourceFile &file,
                       const TextOptions &opts = {});

// ---- verify ----

class VerifyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct VerifyDirective {
  Severity severity = Severity::Warning;
  int line = 0;          // target line, offset applied
  int directive_line = 0;
  std::string text;
};

struct EmittedDiag {
  Severity severity = Severity::Warning;
  int line = 0;
  std::string message;
};

/// Directives inside `//` comments. Throws VerifyError on malformed ones.
std::vector<VerifyDirective> parseDirectives(const std::string &source);

/// Warning and note headers of rendered text output.
std::vector<EmittedDiag> parseRendered(const std::string &rendered);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> mismatches;
};

VerifyResult verifyRun(const std::string &source, const std::string &rendered);

} // namespace minisa::report
