#pragma once

#include "minisa/checkers/checkers.h"
#include "minisa/frontend/frontend.h"
#include "minisa/reporting/reporting.h"
#include "minisa/symexec/engine.h"
#include "minisa/tidy/diagnostic.h"

#include <memory>
#include <string>
#include <vector>

namespace minisa::driver {

struct AnalyzeConfig {
  std::string checkers; // comma list; empty means all
  sym::AnalysisOptions engine;
  report::TextOptions text;
};

struct AnalyzeRun {
  std::unique_ptr<Unit> unit;
  sym::AnalysisResult result;
  std::vector<report::BugPath> paths; // sorted by location

  std::string renderText(const report::TextOptions &opts = {}) const;
  /// `file:line:col: remark: ...` lines for tool notes.
  std::string renderNotes() const;
  /// Concatenated DOT graphs, one per top-level function.
  std::string dumpEgraph() const;
  std::string dumpCfg() const;
};

/// `unit` must have no frontend errors. Throws sym::ConfigError for an
/// unknown checker.
AnalyzeRun analyze(std::unique_ptr<Unit> unit, const AnalyzeConfig &cfg);
/// Convenience: load + analyze. Throws std::runtime_error on frontend errors.
AnalyzeRun analyzeSource(const std::string &name, const std::string &text,
                         const AnalyzeConfig &cfg = {});

struct TidyConfig {
  std::string checks; // comma list; empty means all
  int std_mode = 14;
};

/// Throws sym::ConfigError for an unknown check.
std::vector<Diagnostic> runTidy(const Unit &unit, const TidyConfig &cfg);
std::string renderTidyText(const std::vector<Diagnostic> &diags, const SourceFile &file);

std::string readFile(const std::string &path); // throws std::runtime_error
void writeFile(const std::string &path, const std::string &text);

} // namespace minisa::driver
