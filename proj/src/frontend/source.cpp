#include "minisa/frontend/source.h"

#include <algorithm>
#include <stdexcept>

namespace minisa {

SourceFile::SourceFile(std::string name, std::string text, int file_id)
    : name_(std::move(name)), text_(std::move(text)), id_(file_id) {
  line_starts_.push_back(0);
  for (int i = 0; i < static_cast<int>(text_.size()); ++i)
    if (text_[i] == '\n')
      line_starts_.push_back(i + 1);
}

SourceLocation SourceFile::locationAt(int offset) const {
  if (offset < 0 || offset > static_cast<int>(text_.size()))
    throw std::out_of_range("source offset out of range");
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  int line = static_cast<int>(it - line_starts_.begin());
  SourceLocation loc;
  loc.file_id = id_;
  loc.line = line;
  loc.column = offset - line_starts_[line - 1] + 1;
  loc.offset = offset;
  return loc;
}

std::string_view SourceFile::lineText(int line) const {
  if (line < 1 || line > lineCount())
    return {};
  int start = line_starts_[line - 1];
  int end = line < lineCount() ? line_starts_[line] - 1
                               : static_cast<int>(text_.size());
  std::string_view sv(text_);
  auto out = sv.substr(start, end - start);
  if (!out.empty() && out.back() == '\r')
    out.remove_suffix(1);
  return out;
}

std::string getSourceText(const SourceRange &range, std::string_view text) {
  int b = range.begin.offset;
  int e = range.end.offset;
  if (b < 0 || e < b || e > static_cast<int>(text.size()))
    throw std::out_of_range("source range out of bounds");
  return std::string(text.substr(b, e - b));
}

std::string getSourceText(const SourceRange &range, const SourceFile &file) {
  return getSourceText(range, std::string_view(file.text()));
}

} // namespace minisa
