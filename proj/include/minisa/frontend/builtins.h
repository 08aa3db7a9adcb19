#pragma once

#include "minisa/frontend/ast.h"

#include <string_view>
#include <vector>

namespace minisa {

struct StringMethod {
  std::string_view name;
  TypeRef result;
  std::vector<TypeRef> params;
  bool is_const;          // callable on a const receiver
  bool obtains_buffer;    // c_str, data
  bool invalidates;       // may reallocate the inner buffer
};

/// The fixed method table of the builtin `string` type.
const std::vector<StringMethod> &stringMethods();
const StringMethod *findStringMethod(std::string_view name);

} // namespace minisa
