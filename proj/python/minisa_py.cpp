#include "minisa/driver/driver.h"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace minisa;

namespace {

std::unique_ptr<Unit> parse(const std::string &text, const std::string &name, int std_mode) {
  auto unit = loadUnit(name, text, ParseOptions{std_mode});
  if (!unit->ok())
    throw py::value_error(formatFrontendErrors(*unit));
  return unit;
}

py::dict location(const SourceLocation &l) {
  py::dict d;
  d["line"] = l.line;
  d["column"] = l.column;
  return d;
}

py::list tokens(const std::string &text) {
  LexResult lr = tokenize(text);
  if (!lr.ok())
    throw py::value_error(lr.errors[0].message);
  py::list out;
  for (const Token &t : lr.tokens)
    if (t.kind != TokenKind::EndOfFile)
      out.append(py::make_tuple(tokenKindName(t.kind), t.text, t.range.begin.line,
                                t.range.begin.column));
  return out;
}

py::dict analyze(const std::string &text, const std::string &checkers, const std::string &name,
                 int unroll, int node_budget, int inline_depth) {
  driver::AnalyzeConfig cfg;
  cfg.checkers = checkers;
  cfg.engine.unroll = unroll;
  cfg.engine.node_budget = node_budget;
  cfg.engine.inline_depth = inline_depth;
  driver::AnalyzeRun run;
  try {
    run = driver::analyze(parse(text, name, 14), cfg);
  } catch (const sym::ConfigError &e) {
    throw py::value_error(e.what());
  }
  py::list reports;
  for (const auto &p : run.paths) {
    py::dict r = location(p.report->loc);
    r["checker"] = p.report->checker;
    r["message"] = p.report->message;
    py::list notes;
    for (const auto &piece : p.pieces) {
      py::dict n = location(piece.loc);
      n["message"] = piece.message;
      notes.append(n);
    }
    r["notes"] = notes;
    reports.append(r);
  }
  py::dict out;
  out["reports"] = reports;
  out["text"] = run.renderText(cfg.text);
  return out;
}

py::dict tidy(const std::string &text, const std::string &checks, int std_mode,
              const std::string &name) {
  auto unit = parse(text, name, std_mode);
  std::vector<Diagnostic> diags;
  try {
    diags = driver::runTidy(*unit, {checks, std_mode});
  } catch (const sym::ConfigError &e) {
    throw py::value_error(e.what());
  }
  py::list list;
  for (const Diagnostic &d : diags) {
    py::dict e = location(d.location);
    e["message"] = d.message;
    e["check"] = d.check_name;
    list.append(e);
  }
  py::dict out;
  out["diagnostics"] = list;
  out["text"] = driver::renderTidyText(diags, *unit->file);
  out["fixed"] = applyFixes(unit->text(), diags).text;
  return out;
}

py::tuple verify(const std::string &text, const std::string &name) {
  auto run = driver::analyze(parse(text, name, 14), {});
  try {
    auto v = report::verifyRun(text, run.renderText());
    return py::make_tuple(v.ok, v.mismatches);
  } catch (const report::VerifyError &e) {
    throw py::value_error(e.what());
  }
}

} // namespace

PYBIND11_MODULE(minisa, m) {
  m.doc() = "MiniLang static analysis toolkit";
  m.def("tokenize", &tokens, py::arg("text"),
        "List of (kind, text, line, column) tuples.");
  m.def(
      "dump_ast",
      [](const std::string &text, int std_mode) { return dumpAst(parse(text, "input.mc", std_mode)->root()); },
      py::arg("text"), py::arg("std") = 14);
  m.def("analyze", &analyze, py::arg("text"), py::arg("checkers") = "",
        py::arg("name") = "input.mc", py::arg("unroll") = sym::AnalysisOptions{}.unroll,
        py::arg("node_budget") = sym::AnalysisOptions{}.node_budget,
        py::arg("inline_depth") = sym::AnalysisOptions{}.inline_depth);
  m.def("tidy", &tidy, py::arg("text"), py::arg("checks") = "", py::arg("std") = 14,
        py::arg("name") = "input.mc");
  m.def("checker_help", [] { return checkers::checkerHelp(checkers::builtinCheckers()); });
  m.def("verify", &verify, py::arg("text"), py::arg("name") = "input.mc",
        "(ok, mismatches) for the expected-* directives in `text`.");
}
