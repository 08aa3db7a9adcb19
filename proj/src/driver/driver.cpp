#include "minisa/driver/driver.h"

#include "minisa/tidy/redundant_pointer.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace minisa::driver {

AnalyzeRun analyze(std::unique_ptr<Unit> unit, const AnalyzeConfig &cfg) {
  AnalyzeRun run;
  checkers::CheckerSelection sel = checkers::selectCheckers(cfg.checkers);
  sym::Engine eng(*unit, cfg.engine);
  checkers::registerCheckers(eng, sel);
  run.result = eng.run();
  run.unit = std::move(unit);
  for (const sym::BugReport &r : run.result.reports)
    run.paths.push_back(report::assembleBugPath(r));
  std::stable_sort(run.paths.begin(), run.paths.end(),
                   [](const report::BugPath &a, const report::BugPath &b) {
                     return a.report->loc.offset < b.report->loc.offset;
                   });
  return run;
}

AnalyzeRun analyzeSource(const std::string &name, const std::string &text,
                         const AnalyzeConfig &cfg) {
  auto unit = loadUnit(name, text);
  if (!unit->ok())
    throw std::runtime_error(formatFrontendErrors(*unit));
  return analyze(std::move(unit), cfg);
}

std::string AnalyzeRun::renderText(const report::TextOptions &opts) const {
  return report::renderText(paths, *unit->file, opts);
}

std::string AnalyzeRun::renderNotes() const {
  std::string out;
  for (const sym::ToolNote &n : result.notes)
    out += unit->file->name() + ":" + std::to_string(n.loc.line) + ":" +
           std::to_string(n.loc.column) + ": remark: " + n.message + "\n";
  return out;
}

std::string AnalyzeRun::dumpEgraph() const {
  std::string out;
  for (const auto &g : result.graphs)
    out += sym::dumpGraph(*g);
  return out;
}

std::string AnalyzeRun::dumpCfg() const {
  std::string out;
  for (const Node *d : unit->root()->children)
    if (d->kind == NodeKind::FunctionDecl && functionBody(d))
      out += cfg::dumpCfg(cfg::buildCfg(d)) + "\n";
  return out;
}

std::vector<Diagnostic> runTidy(const Unit &unit, const TidyConfig &cfg) {
  bool enabled = cfg.checks.empty();
  std::stringstream ss(cfg.checks);
  for (std::string t; std::getline(ss, t, ',');) {
    if (t.empty())
      continue;
    bool hit = t == tidy::kRedundantPointerCheck || t == "*" || t == "readability-*";
    if (!hit)
      throw sym::ConfigError("no tidy check named '" + t + "'");
    enabled = true;
  }
  if (!enabled)
    return {};
  return tidy::runRedundantPointerCheck(unit, cfg.std_mode);
}

std::string renderTidyText(const std::vector<Diagnostic> &diags, const SourceFile &file) {
  std::string out;
  int warnings = 0;
  for (const Diagnostic &d : diags) {
    out += renderDiagnostic(d, file);
    warnings += d.severity == Severity::Warning;
  }
  out += std::to_string(warnings) + " warning(s) generated in " + file.name() + "\n";
  return out;
}

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void writeFile(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw std::runtime_error("cannot write '" + path + "'");
}

} // namespace minisa::driver
