#pragma once

#include "minisa/frontend/ast.h"
#include "minisa/frontend/lexer.h"
#include "minisa/frontend/parser.h"
#include "minisa/frontend/sema.h"
#include "minisa/frontend/source.h"

#include <memory>
#include <string>
#include <vector>

namespace minisa {

/// A lexed, parsed and type-checked source file.
struct Unit {
  std::unique_ptr<SourceFile> file;
  std::vector<Token> tokens;
  std::unique_ptr<AstContext> ast;
  std::vector<FrontendDiag> errors;

  bool ok() const { return errors.empty(); }
  Node *root() const { return ast ? ast->root() : nullptr; }
  const std::string &text() const { return file->text(); }
};

std::unique_ptr<Unit> loadUnit(std::string name, std::string text,
                               const ParseOptions &opts = {});

/// `file:line:col: error: message` lines.
std::string formatFrontendErrors(const Unit &unit);

} // namespace minisa
