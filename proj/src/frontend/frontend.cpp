#include "minisa/frontend/frontend.h"

#include <algorithm>

namespace minisa {

std::unique_ptr<Unit> loadUnit(std::string name, std::string text,
                               const ParseOptions &opts) {
  auto unit = std::make_unique<Unit>();
  unit->file = std::make_unique<SourceFile>(std::move(name), std::move(text));
  LexResult lexed = tokenize(*unit->file);
  unit->tokens = std::move(lexed.tokens);
  unit->errors = std::move(lexed.errors);
  ParseResult parsed = parse(unit->tokens, *unit->file, opts);
  unit->ast = std::move(parsed.ast);
  for (auto &e : parsed.errors)
    unit->errors.push_back(std::move(e));
  if (unit->errors.empty()) {
    for (auto &e : typecheck(*unit->ast))
      unit->errors.push_back(std::move(e));
  }
  std::stable_sort(unit->errors.begin(), unit->errors.end(),
                   [](const FrontendDiag &a, const FrontendDiag &b) {
                     return a.loc.offset < b.loc.offset;
                   });
  return unit;
}

std::string formatFrontendErrors(const Unit &unit) {
  std::string out;
  for (const auto &e : unit.errors) {
    out += unit.file->name() + ":" + std::to_string(e.loc.line) + ":" +
           std::to_string(e.loc.column) + ": error: " + e.message + "\n";
  }
  return out;
}

} // namespace minisa
