#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace minisa {

struct SourceLocation {
  int file_id = 0;
  int line = 1;
  int column = 1;
  int offset = 0;

  friend bool operator==(const SourceLocation &a, const SourceLocation &b) {
    return a.file_id == b.file_id && a.offset == b.offset;
  }
  friend std::strong_ordering operator<=>(const SourceLocation &a,
                                          const SourceLocation &b) {
    if (auto c = a.file_id <=> b.file_id; c != 0)
      return c;
    return a.offset <=> b.offset;
  }
};

/// Half-open: `end` is the first byte past the last token.
struct SourceRange {
  SourceLocation begin;
  SourceLocation end;

  bool empty() const { return begin.offset == end.offset; }
  int length() const { return end.offset - begin.offset; }
  bool contains(const SourceRange &other) const {
    return begin.offset <= other.begin.offset && other.end.offset <= end.offset;
  }
  friend bool operator==(const SourceRange &, const SourceRange &) = default;
};

class SourceFile {
public:
  SourceFile(std::string name, std::string text, int file_id = 0);

  const std::string &name() const { return name_; }
  const std::string &text() const { return text_; }
  int id() const { return id_; }

  SourceLocation locationAt(int offset) const;
  std::string_view lineText(int line) const;
  int lineCount() const { return static_cast<int>(line_starts_.size()); }

private:
  std::string name_;
  std::string text_;
  int id_;
  std::vector<int> line_starts_;
};

/// Exact byte slice of `range`. Throws std::out_of_range when the range does
/// not lie within the file.
std::string getSourceText(const SourceRange &range, const SourceFile &file);
std::string getSourceText(const SourceRange &range, std::string_view text);

} // namespace minisa
