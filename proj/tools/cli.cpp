#include "cli.h"

#include "minisa/driver/driver.h"

#include <CLI11.hpp>

#include <ostream>

namespace minisa::cli {

namespace {

struct Options {
  std::vector<std::string> inputs;
  std::string checkers;
  std::string checks;
  int std_mode = 14;
  bool fix = false;
  bool verify = false;
  std::string output = "text";
  bool dump_ast = false;
  bool dump_cfg = false;
  std::string dump_egraph;
  int unroll = sym::AnalysisOptions{}.unroll;
  int node_budget = sym::AnalysisOptions{}.node_budget;
  int inline_depth = sym::AnalysisOptions{}.inline_depth;
  bool checker_help = false;
  bool no_dup_note = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void addFlags(CLI::App &app, Options &o) {
  app.add_option("inputs", o.inputs, "MiniLang source files (.mc)");
  app.add_option("--checker", o.checkers, "Checkers or packages to enable, comma separated");
  app.add_option("--checks", o.checks, "Tidy checks to enable, comma separated");
  app.add_option("--std", o.std_mode, "Language standard")->check(CLI::IsMember({14, 17}));
  app.add_flag("--fix", o.fix, "Apply fix-its in place");
  app.add_flag("--verify", o.verify, "Check output against expected-* comments");
  app.add_option("--analyzer-output", o.output, "text or html:<path>");
  app.add_flag("--dump-ast", o.dump_ast, "Print the AST");
  app.add_flag("--dump-cfg", o.dump_cfg, "Print the control flow graphs");
  app.add_option("--dump-egraph", o.dump_egraph, "Write exploded graphs as DOT");
  app.add_option("--unroll", o.unroll, "Loop unroll limit")->check(CLI::NonNegativeNumber);
  app.add_option("--node-budget", o.node_budget, "Exploded nodes per function")
      ->check(CLI::PositiveNumber);
  app.add_option("--inline-depth", o.inline_depth, "Maximum inlining depth")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--analyzer-checker-help", o.checker_help, "List the available checkers");
  app.add_flag("--no-duplicate-warning-note", o.no_dup_note,
               "Do not repeat the warning as the last path note");
}

void validate(Command cmd, const Options &o) {
  if (o.checker_help)
    return;
  if (o.inputs.empty())
    throw UsageError("no input files");
  if (o.fix && cmd != Command::Tidy)
    throw UsageError("--fix is only available in mini-tidy");
  if (o.output != "text" && (o.output.rfind("html:", 0) != 0 || o.output.size() == 5))
    throw UsageError("--analyzer-output must be 'text' or 'html:<path>'");
  if (o.verify && o.output != "text")
    throw UsageError("--verify needs text output");
  if (o.fix && o.verify)
    throw UsageError("--fix and --verify cannot be combined");
}

std::unique_ptr<Unit> load(const std::string &path, const Options &o, std::ostream &err) {
  auto unit = loadUnit(path, driver::readFile(path), ParseOptions{o.std_mode});
  if (!unit->ok()) {
    err << formatFrontendErrors(*unit);
    return nullptr;
  }
  return unit;
}

void dumps(const Unit &unit, const Options &o, std::ostream &out) {
  if (o.dump_ast)
    out << dumpAst(unit.root());
  if (o.dump_cfg)
    for (const Node *d : unit.root()->children)
      if (d->kind == NodeKind::FunctionDecl && functionBody(d))
        out << cfg::dumpCfg(cfg::buildCfg(d)) << "\n";
}

int verdict(const report::VerifyResult &v, const std::string &path, std::ostream &out) {
  for (const std::string &m : v.mismatches)
    out << path << ": verify: " << m << "\n";
  out << path << ": verify " << (v.ok ? "passed" : "failed") << " (" << v.mismatches.size()
      << " mismatch(es))\n";
  return v.ok ? 0 : 1;
}

int analyzeFiles(const Options &o, std::ostream &out, std::ostream &err) {
  driver::AnalyzeConfig cfg;
  cfg.checkers = o.checkers;
  cfg.engine.unroll = o.unroll;
  cfg.engine.node_budget = o.node_budget;
  cfg.engine.inline_depth = o.inline_depth;
  cfg.text.duplicate_warning_note = !o.no_dup_note;
  checkers::selectCheckers(o.checkers); // reject unknown names before reading files

  int code = 0;
  std::vector<driver::AnalyzeRun> runs;
  std::string dot;
  for (const std::string &path : o.inputs) {
    auto unit = load(path, o, err);
    if (!unit)
      return 2;
    std::string source = unit->text();
    dumps(*unit, o, out);
    driver::AnalyzeRun run = driver::analyze(std::move(unit), cfg);
    err << run.renderNotes();
    if (!o.dump_egraph.empty())
      dot += run.dumpEgraph();
    if (o.output == "text") {
      std::string text = run.renderText(cfg.text);
      if (o.verify)
        code = std::max(code, verdict(report::verifyRun(source, text), path, out));
      else
        out << text;
    }
    if (!o.verify && !run.paths.empty())
      code = std::max(code, 1);
    runs.push_back(std::move(run));
  }
  if (!o.dump_egraph.empty())
    driver::writeFile(o.dump_egraph, dot);
  if (o.output != "text") {
    std::vector<report::FileReport> files;
    size_t total = 0;
    for (const auto &r : runs) {
      files.push_back({r.unit->file.get(), r.paths});
      total += r.paths.size();
    }
    std::string path = o.output.substr(5);
    driver::writeFile(path, report::renderHtml(files, cfg.text));
    out << "Found " << total << " defect(s); report written to " << path << "\n";
  }
  return code;
}

int tidyFiles(const Options &o, std::ostream &out, std::ostream &err) {
  driver::TidyConfig cfg{o.checks, o.std_mode};
  int code = 0;
  for (const std::string &path : o.inputs) {
    auto unit = load(path, o, err);
    if (!unit)
      return 2;
    dumps(*unit, o, out);
    auto diags = driver::runTidy(*unit, cfg);
    std::string text = driver::renderTidyText(diags, *unit->file);
    if (o.verify) {
      code = std::max(code, verdict(report::verifyRun(unit->text(), text), path, out));
      continue;
    }
    out << text;
    if (!diags.empty())
      code = std::max(code, 1);
    if (o.fix && !diags.empty()) {
      FixResult fixed = applyFixes(unit->text(), diags);
      for (const std::string &w : fixed.tool_warnings)
        err << path << ": warning: " << w << "\n";
      driver::writeFile(path, fixed.text);
      out << "Applied " << fixed.applied_groups << " fix(es) to " << path << "\n";
    }
  }
  return code;
}

} // namespace

int run(Command cmd, std::vector<std::string> args, std::ostream &out, std::ostream &err) {
  const char *name = cmd == Command::Analyze ? "mini-analyze" : "mini-tidy";
  CLI::App app{cmd == Command::Analyze ? "Path-sensitive analyzer for MiniLang"
                                       : "Lint and rewrite tool for MiniLang",
               name};
  Options o;
  addFlags(app, o);
  try {
    std::reverse(args.begin(), args.end()); // CLI11 consumes the vector from the back
    app.parse(args);
    validate(cmd, o);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << name << ": " << e.what() << "\n" << app.help();
    return 2;
  } catch (const UsageError &e) {
    err << name << ": " << e.what() << "\n" << app.help();
    return 2;
  }

  if (o.checker_help) {
    out << checkers::checkerHelp(checkers::builtinCheckers());
    return 0;
  }
  try {
    return cmd == Command::Analyze ? analyzeFiles(o, out, err) : tidyFiles(o, out, err);
  } catch (const sym::ConfigError &e) {
    err << name << ": error: " << e.what() << "\n";
  } catch (const report::VerifyError &e) {
    err << name << ": error: " << e.what() << "\n";
  } catch (const std::runtime_error &e) {
    err << name << ": error: " << e.what() << "\n";
  }
  return 2;
}

} // namespace minisa::cli
