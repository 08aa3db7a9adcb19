#pragma once

#include "minisa/frontend/ast.h"
#include "minisa/frontend/lexer.h"

#include <vector>

namespace minisa {

/// Resolves names, assigns types and validates the unit in place.
std::vector<FrontendDiag> typecheck(AstContext &ast);

bool isLValue(const Node *expr);
bool isNullPointerConstant(const Node *expr);

const Node *findStruct(const Node *tu, std::string_view name);
const Node *findField(const Node *struct_decl, std::string_view name);

} // namespace minisa
