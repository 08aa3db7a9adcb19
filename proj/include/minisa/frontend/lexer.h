#pragma once

#include "minisa/frontend/source.h"

#include <string>
#include <vector>

namespace minisa {

enum class TokenKind { Keyword, Identifier, Literal, Punctuator, EndOfFile };

const char *tokenKindName(TokenKind kind);

struct Comment {
  std::string text; // including the comment markers
  SourceRange range;
  bool is_line = true;
};

struct Token {
  TokenKind kind = TokenKind::EndOfFile;
  std::string text;
  SourceRange range;
  /// Whitespace and comments between the previous token and this one.
  std::string leading_trivia;
  std::vector<Comment> comments;

  bool is(TokenKind k, std::string_view t) const {
    return kind == k && text == t;
  }
  bool isPunct(std::string_view t) const { return is(TokenKind::Punctuator, t); }
  bool isKeyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
};

struct FrontendDiag {
  SourceLocation loc;
  std::string message;
};

struct LexResult {
  /// Always terminated by an EndOfFile token that carries the trailing trivia.
  std::vector<Token> tokens;
  std::vector<FrontendDiag> errors;

  bool ok() const { return errors.empty(); }
};

bool isKeyword(std::string_view word);

LexResult tokenize(const SourceFile &file);
LexResult tokenize(std::string_view text, int file_id = 0);

} // namespace minisa
