#include "minisa/reporting/reporting.h"

#include <regex>
#include <set>
#include <sstream>

namespace minisa::report {

BugPath assembleBugPath(const sym::BugReport &r) {
  if (!r.graph || !r.graph->contains(r.error_node))
    throw std::logic_error("bug report error node is not part of its exploded graph");
  BugPath path;
  path.report = &r;
  std::set<size_t> fired;
  for (const sym::ExplodedNode *n = r.error_node; n; n = n->firstPred()) {
    const sym::ExplodedNode *pred = n->firstPred();
    for (size_t i = 0; i < r.visitors.size(); ++i) {
      if (fired.count(i))
        continue;
      if (auto p = r.visitors[i]->visitNode(n, pred, r)) {
        fired.insert(i);
        path.pieces.push_back(*p);
      }
    }
  }
  std::reverse(path.pieces.begin(), path.pieces.end());
  sym::PathPiece last;
  last.kind = sym::PathPiece::Kind::FinalWarning;
  last.loc = r.loc;
  last.message = r.message;
  path.pieces.push_back(last);
  return path;
}

Diagnostic toDiagnostic(const BugPath &p, const TextOptions &opts) {
  Diagnostic d;
  d.location = p.report->loc;
  d.message = p.report->message;
  d.severity = Severity::Warning;
  d.check_name = p.report->checker;
  for (const auto &piece : p.pieces) {
    if (piece.kind == sym::PathPiece::Kind::FinalWarning && !opts.duplicate_warning_note)
      continue;
    Diagnostic n;
    n.location = piece.loc;
    n.message = piece.message;
    n.severity = Severity::Note;
    d.notes.push_back(n);
  }
  return d;
}

std::string renderText(const std::vector<BugPath> &paths, const SourceFile &file,
                       const TextOptions &opts) {
  std::string out;
  for (const BugPath &p : paths)
    out += renderDiagnostic(toDiagnostic(p, opts), file);
  out += "Found " + std::to_string(paths.size()) + " defect(s) in " + file.name() + "\n";
  return out;
}

namespace {

std::string esc(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace

std::string renderHtml(const std::vector<FileReport> &files, const TextOptions &opts) {
  std::ostringstream os;
  std::string title = files.size() == 1 ? files[0].file->name() : "analysis report";
  os << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\"/>\n<title>" << esc(title)
     << "</title>\n<style>\n"
     << "body { font-family: sans-serif; margin: 2em; }\n"
     << ".report { border: 1px solid #ccc; padding: 1em; margin-bottom: 1.5em; }\n"
     << ".warning { color: #b00; }\n.note { color: #035; }\n"
     << "pre { background: #f6f6f6; padding: 0.3em; margin: 0.2em 0 0.6em 0; }\n"
     << "</style>\n</head>\n<body>\n";
  size_t total = 0;
  int idx = 0;
  for (const FileReport &fr : files) {
    const SourceFile &file = *fr.file;
    total += fr.paths.size();
    os << "<h1>" << esc(file.name()) << "</h1>\n";
    if (fr.paths.empty())
      os << "<p>No defects found</p>\n";
    for (const BugPath &p : fr.paths) {
      Diagnostic d = toDiagnostic(p, opts);
      os << "<div class=\"report\" id=\"report-" << ++idx << "\">\n"
         << "<h2><span class=\"warning\">warning</span>: " << esc(d.message) << " ["
         << esc(d.check_name) << "]</h2>\n"
         << "<p>" << esc(file.name()) << ":" << d.location.line << ":" << d.location.column
         << " &middot; " << esc(p.report->bug_type) << " &middot; " << esc(p.report->category)
         << "</p>\n<ol>\n";
      std::vector<Diagnostic> steps = d.notes;
      if (steps.empty())
        steps.push_back(d);
      for (const Diagnostic &n : steps)
        os << "<li><span class=\"note\">line " << n.location.line << ": " << esc(n.message)
           << "</span>\n<pre>" << esc(file.lineText(n.location.line)) << "</pre></li>\n";
      os << "</ol>\n</div>\n";
    }
    os << "<p>Found " << fr.paths.size() << " defect(s) in " << esc(file.name()) << "</p>\n";
  }
  if (files.size() > 1 && total == 0)
    os << "<p>No defects found</p>\n";
  os << "</body>\n</html>\n";
  return os.str();
}

std::string renderHtml(const std::vector<BugPath> &paths, const SourceFile &file,
                       const TextOptions &opts) {
  return renderHtml(std::vector<FileReport>{{&file, paths}}, opts);
}

// ---- verify ----

std::vector<VerifyDirective> parseDirectives(const std::string &source) {
  static const std::regex kDirective(
      R"(^\s*expected-(warning|note)(@([+-])(\d+))?\s*\{\{(.*?)\}\}\s*$)");
  std::vector<VerifyDirective> out;
  std::istringstream in(source);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t c = line.find("//");
    if (c == std::string::npos)
      continue;
    std::string comment = line.substr(c + 2);
    if (comment.find("expected-") == std::string::npos)
      continue;
    std::smatch m;
    if (!std::regex_match(comment, m, kDirective))
      throw VerifyError("line " + std::to_string(lineno) + ": malformed verify directive");
    VerifyDirective d;
    d.severity = m[1] == "warning" ? Severity::Warning : Severity::Note;
    d.directive_line = lineno;
    d.line = lineno;
    if (m[2].matched) {
      int off = std::stoi(m[4]);
      d.line += m[3] == "+" ? off : -off;
    }
    if (d.line < 1)
      throw VerifyError("line " + std::to_string(lineno) + ": directive offset points before the file");
    d.text = m[5];
    if (d.text.empty())
      throw VerifyError("line " + std::to_string(lineno) + ": empty directive text");
    out.push_back(d);
  }
  return out;
}

std::vector<EmittedDiag> parseRendered(const std::string &rendered) {
  static const std::regex kHeader(R"(^.*?:(\d+):(\d+): (warning|note): (.*)$)");
  static const std::regex kSuffix(R"( \[[A-Za-z0-9_.\-]+\]$)");
  std::vector<EmittedDiag> out;
  std::istringstream in(rendered);
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (!std::regex_match(line, m, kHeader))
      continue;
    EmittedDiag e;
    e.line = std::stoi(m[1]);
    e.severity = m[3] == "warning" ? Severity::Warning : Severity::Note;
    e.message = m[4];
    if (e.severity == Severity::Warning)
      e.message = std::regex_replace(e.message, kSuffix, "");
    out.push_back(e);
  }
  return out;
}

namespace {

const char *sevName(Severity s) { return s == Severity::Warning ? "warning" : "note"; }

bool matches(const VerifyDirective &d, const EmittedDiag &e) {
  return d.severity == e.severity && e.message.find(d.text) != std::string::npos;
}

} // namespace

VerifyResult verifyRun(const std::string &source, const std::string &rendered) {
  auto expected = parseDirectives(source);
  auto seen = parseRendered(rendered);
  std::vector<bool> exp_used(expected.size()), seen_used(seen.size());

  for (size_t i = 0; i < expected.size(); ++i)
    for (size_t j = 0; j < seen.size(); ++j)
      if (!seen_used[j] && expected[i].line == seen[j].line && matches(expected[i], seen[j])) {
        exp_used[i] = seen_used[j] = true;
        break;
      }

  VerifyResult r;
  // Leftovers pair up when they differ in one respect only.
  for (size_t i = 0; i < expected.size(); ++i) {
    if (exp_used[i])
      continue;
    for (size_t j = 0; j < seen.size(); ++j)
      if (!seen_used[j] && matches(expected[i], seen[j])) {
        exp_used[i] = seen_used[j] = true;
        r.mismatches.push_back("line " + std::to_string(expected[i].directive_line) + ": expected " +
                               sevName(expected[i].severity) + " '" + expected[i].text +
                               "' on line " + std::to_string(expected[i].line) + ", seen on line " +
                               std::to_string(seen[j].line));
        break;
      }
  }
  for (size_t i = 0; i < expected.size(); ++i) {
    if (exp_used[i])
      continue;
    for (size_t j = 0; j < seen.size(); ++j)
      if (!seen_used[j] && expected[i].line == seen[j].line &&
          expected[i].severity == seen[j].severity) {
        exp_used[i] = seen_used[j] = true;
        r.mismatches.push_back("line " + std::to_string(expected[i].line) + ": expected " +
                               sevName(expected[i].severity) + " '" + expected[i].text +
                               "', seen '" + seen[j].message + "'");
        break;
      }
  }
  for (size_t i = 0; i < expected.size(); ++i)
    if (!exp_used[i])
      r.mismatches.push_back("line " + std::to_string(expected[i].line) + ": expected " +
                             sevName(expected[i].severity) + " '" + expected[i].text +
                             "' not seen");
  for (size_t j = 0; j < seen.size(); ++j)
    if (!seen_used[j])
      r.mismatches.push_back("line " + std::to_string(seen[j].line) + ": unexpected " +
                             sevName(seen[j].severity) + " '" + seen[j].message + "'");
  r.ok = r.mismatches.empty();
  return r;
}

} // namespace minisa::report
