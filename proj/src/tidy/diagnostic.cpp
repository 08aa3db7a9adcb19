#include "minisa/tidy/diagnostic.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace minisa {

FixIt FixIt::insertion(SourceLocation loc, std::string text) {
  return {Kind::Insertion, {loc, loc}, std::move(text)};
}

FixIt FixIt::replacement(SourceRange range, std::string text) {
  return {Kind::Replacement, range, std::move(text)};
}

FixIt FixIt::removal(SourceRange range) { return {Kind::Removal, range, {}}; }

Diagnostic emitDiag(SourceLocation loc, const std::string &tmpl,
                    const std::vector<DiagArg> &args, Severity severity,
                    std::string check_name) {
  std::string msg;
  for (size_t i = 0; i < tmpl.size(); ++i) {
    char c = tmpl[i];
    if (c == '%' && i + 1 < tmpl.size() &&
        std::isdigit(static_cast<unsigned char>(tmpl[i + 1]))) {
      size_t idx = tmpl[++i] - '0';
      if (idx >= args.size())
        throw std::logic_error("diagnostic placeholder %" +
                               std::to_string(idx) + " has no argument");
      const DiagArg &a = args[idx];
      if (auto *s = std::get_if<std::string>(&a))
        msg += *s;
      else
        msg += "'" + std::get<const Node *>(a)->name + "'";
      continue;
    }
    msg += c;
  }
  Diagnostic d;
  d.location = loc;
  d.message = std::move(msg);
  d.severity = severity;
  d.check_name = std::move(check_name);
  return d;
}

namespace {

void renderOne(const Diagnostic &d, const SourceFile &file, std::string &out) {
  out += file.name() + ":" + std::to_string(d.location.line) + ":" +
         std::to_string(d.location.column) + ": " +
         (d.severity == Severity::Warning ? "warning" : "note") + ": " +
         d.message;
  if (d.severity == Severity::Warning && !d.check_name.empty())
    out += " [" + d.check_name + "]";
  out += "\n";
  std::string_view line = file.lineText(d.location.line);
  out += std::string(line) + "\n";
  std::string caret;
  for (int i = 1; i < d.location.column && i - 1 < static_cast<int>(line.size()); ++i)
    caret += line[i - 1] == '\t' ? '\t' : ' ';
  out += caret + "^\n";
  for (const FixIt &f : d.fixits) {
    if (f.kind == FixIt::Kind::Removal || f.range.begin.line != d.location.line)
      continue;
    std::string pad;
    for (int i = 1; i < f.range.begin.column && i - 1 < static_cast<int>(line.size()); ++i)
      pad += line[i - 1] == '\t' ? '\t' : ' ';
    out += pad + f.text + "\n";
  }
}

struct Edit {
  int begin;
  int end;
  std::string text;
};

bool overlaps(const Edit &a, const Edit &b) {
  if (a.begin == a.end || b.begin == b.end) // insertions
    return a.begin == b.begin || (a.begin > b.begin && a.begin < b.end) ||
           (b.begin > a.begin && b.begin < a.end);
  return a.begin < b.end && b.begin < a.end;
}

void collect(const Diagnostic &d, std::vector<Edit> &out) {
  for (const FixIt &f : d.fixits)
    out.push_back({f.range.begin.offset, f.range.end.offset,
                   f.kind == FixIt::Kind::Removal ? std::string() : f.text});
  for (const Diagnostic &n : d.notes)
    collect(n, out);
}

} // namespace

std::string renderDiagnostic(const Diagnostic &d, const SourceFile &file,
                             bool with_notes) {
  std::string out;
  renderOne(d, file, out);
  if (with_notes)
    for (const Diagnostic &n : d.notes)
      renderOne(n, file, out);
  return out;
}

FixResult applyFixes(const std::string &source,
                     const std::vector<Diagnostic> &diagnostics) {
  // Groups in first-appearance order; ungrouped diagnostics stand alone.
  std::vector<std::vector<const Diagnostic *>> groups;
  std::map<int, size_t> index;
  for (const Diagnostic &d : diagnostics) {
    if (d.group < 0) {
      groups.push_back({&d});
      continue;
    }
    auto [it, inserted] = index.emplace(d.group, groups.size());
    if (inserted)
      groups.emplace_back();
    groups[it->second].push_back(&d);
  }

  FixResult result;
  std::vector<Edit> accepted;
  for (const auto &g : groups) {
    std::vector<Edit> edits;
    for (const Diagnostic *d : g)
      collect(*d, edits);
    if (edits.empty())
      continue;
    bool conflict = false;
    for (size_t i = 0; i < edits.size() && !conflict; ++i) {
      if (edits[i].begin < 0 || edits[i].end > static_cast<int>(source.size()))
        conflict = true;
      for (size_t j = i + 1; j < edits.size() && !conflict; ++j)
        conflict = overlaps(edits[i], edits[j]);
      for (const Edit &a : accepted)
        conflict = conflict || overlaps(edits[i], a);
    }
    if (conflict) {
      const Diagnostic *first = g.front();
      result.tool_warnings.push_back(
          "fix-its for diagnostic at " + std::to_string(first->location.line) +
          ":" + std::to_string(first->location.column) +
          " conflict with other fixes; skipped");
      continue;
    }
    accepted.insert(accepted.end(), edits.begin(), edits.end());
    ++result.applied_groups;
  }

  std::stable_sort(accepted.begin(), accepted.end(),
                   [](const Edit &a, const Edit &b) { return a.begin > b.begin; });
  result.text = source;
  for (const Edit &e : accepted)
    result.text.replace(e.begin, e.end - e.begin, e.text);
  return result;
}

} // namespace minisa
