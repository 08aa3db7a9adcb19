#pragma once

#include "minisa/frontend/ast.h"
#include "minisa/frontend/lexer.h"

#include <memory>
#include <vector>

namespace minisa {

struct ParseOptions {
  int std_mode = 14;
};

struct ParseResult {
  std::unique_ptr<AstContext> ast;
  std::vector<FrontendDiag> errors;

  bool ok() const { return errors.empty(); }
};

ParseResult parse(const std::vector<Token> &tokens, const SourceFile &file,
                  const ParseOptions &opts = {});

} // namespace minisa
