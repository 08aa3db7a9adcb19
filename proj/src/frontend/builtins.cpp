#include "minisa/frontend/builtins.h"

namespace minisa {

namespace {

using B = TypeRef::Base;

TypeRef ty(B b, int ind = 0) { return TypeRef::make(b, ind); }

TypeRef stringRef() {
  TypeRef t = ty(B::String);
  t.is_reference = true;
  return t;
}

std::vector<StringMethod> buildTable() {
  TypeRef i = ty(B::Int), s = ty(B::String), c = ty(B::Char);
  TypeRef v = ty(B::Void), b = ty(B::Bool), cp = ty(B::Char, 1);
  return {
      {"c_str", cp, {}, true, true, false},
      {"data", cp, {}, true, true, false},
      {"size", i, {}, true, false, false},
      {"empty", b, {}, true, false, false},
      {"at", c, {i}, true, false, false},
      {"front", c, {}, true, false, false},
      {"back", c, {}, true, false, false},
      {"append", v, {s}, false, false, true},
      {"assign", v, {s}, false, false, true},
      {"clear", v, {}, false, false, true},
      {"erase", v, {i, i}, false, false, true},
      {"insert", v, {i, s}, false, false, true},
      {"pop_back", v, {}, false, false, true},
      {"push_back", v, {c}, false, false, true},
      {"replace", v, {i, i, s}, false, false, true},
      {"reserve", v, {i}, false, false, true},
      {"resize", v, {i}, false, false, true},
      {"shrink_to_fit", v, {}, false, false, true},
      {"swap", v, {stringRef()}, false, false, true},
  };
}

} // namespace

const std::vector<StringMethod> &stringMethods() {
  static const std::vector<StringMethod> table = buildTable();
  return table;
}

const StringMethod *findStringMethod(std::string_view name) {
  for (const auto &m : stringMethods())
    if (m.name == name)
      return &m;
  return nullptr;
}

} // namespace minisa
