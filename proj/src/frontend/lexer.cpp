#include "minisa/frontend/lexer.h"

#include <array>
#include <cctype>

namespace minisa {

namespace {

constexpr std::array<std::string_view, 19> kKeywords = {
    "int",    "bool",   "char",     "void",  "string", "struct", "extern",
    "noreturn", "const", "if",      "else",  "while",  "return", "break",
    "continue", "delete", "new",    "true",  "false"};

constexpr std::array<std::string_view, 8> kTwoCharPuncts = {
    "->", "==", "!=", "<=", ">=", "&&", "||", "+="};

constexpr std::string_view kOneCharPuncts = "(){};,.+-*/<>=!&";

bool isIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool isIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
public:
  Lexer(std::string_view text, const SourceFile &file)
      : text_(text), file_(file) {}

  LexResult run() {
    LexResult out;
    std::string trivia;
    std::vector<Comment> comments;
    while (true) {
      int trivia_start = pos_;
      skipTrivia(comments, out);
      trivia.append(text_.substr(trivia_start, pos_ - trivia_start));
      if (pos_ >= static_cast<int>(text_.size())) {
        Token eof;
        eof.kind = TokenKind::EndOfFile;
        eof.range = {file_.locationAt(pos_), file_.locationAt(pos_)};
        eof.leading_trivia = std::move(trivia);
        eof.comments = std::move(comments);
        out.tokens.push_back(std::move(eof));
        return out;
      }
      int start = pos_;
      Token tok;
      if (!lexOne(tok, out)) {
        // Illegal character: reported, then skipped as trivia.
        trivia.append(text_.substr(start, pos_ - start));
        continue;
      }
      tok.text = std::string(text_.substr(start, pos_ - start));
      tok.range = {file_.locationAt(start), file_.locationAt(pos_)};
      tok.leading_trivia = std::move(trivia);
      tok.comments = std::move(comments);
      trivia.clear();
      comments.clear();
      out.tokens.push_back(std::move(tok));
    }
  }

private:
  char peek(int ahead = 0) const {
    int p = pos_ + ahead;
    return p < static_cast<int>(text_.size()) ? text_[p] : '\0';
  }

  void skipTrivia(std::vector<Comment> &comments, LexResult &out) {
    while (pos_ < static_cast<int>(text_.size())) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
          c == '\v') {
        ++pos_;
      } else if (c == '/' && peek(1) == '/') {
        int start = pos_;
        while (pos_ < static_cast<int>(text_.size()) && peek() != '\n')
          ++pos_;
        comments.push_back({std::string(text_.substr(start, pos_ - start)),
                            {file_.locationAt(start), file_.locationAt(pos_)},
                            true});
      } else if (c == '/' && peek(1) == '*') {
        int start = pos_;
        pos_ += 2;
        while (pos_ < static_cast<int>(text_.size()) &&
               !(peek() == '*' && peek(1) == '/'))
          ++pos_;
        if (pos_ >= static_cast<int>(text_.size())) {
          out.errors.push_back(
              {file_.locationAt(start), "unterminated block comment"});
        } else {
          pos_ += 2;
        }
        comments.push_back({std::string(text_.substr(start, pos_ - start)),
                            {file_.locationAt(start), file_.locationAt(pos_)},
                            false});
      } else {
        return;
      }
    }
  }

  bool lexQuoted(char quote, LexResult &out) {
    int start = pos_;
    ++pos_;
    while (true) {
      char c = peek();
      if (pos_ >= static_cast<int>(text_.size()) || c == '\n') {
        out.errors.push_back({file_.locationAt(start),
                              quote == '"' ? "unterminated string literal"
                                           : "unterminated character literal"});
        return true;
      }
      ++pos_;
      if (c == '\\') {
        if (pos_ < static_cast<int>(text_.size()))
          ++pos_;
      } else if (c == quote) {
        return true;
      }
    }
  }

  bool lexOne(Token &tok, LexResult &out) {
    char c = peek();
    if (isIdentStart(c)) {
      int start = pos_;
      while (isIdentChar(peek()))
        ++pos_;
      tok.kind = isKeyword(text_.substr(start, pos_ - start))
                     ? TokenKind::Keyword
                     : TokenKind::Identifier;
      return true;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (std::isdigit(static_cast<unsigned char>(peek())))
        ++pos_;
      tok.kind = TokenKind::Literal;
      return true;
    }
    if (c == '"' || c == '\'') {
      tok.kind = TokenKind::Literal;
      return lexQuoted(c, out);
    }
    for (auto p : kTwoCharPuncts) {
      if (c == p[0] && peek(1) == p[1]) {
        pos_ += 2;
        tok.kind = TokenKind::Punctuator;
        return true;
      }
    }
    if (kOneCharPuncts.find(c) != std::string_view::npos) {
      ++pos_;
      tok.kind = TokenKind::Punctuator;
      return true;
    }
    out.errors.push_back(
        {file_.locationAt(pos_), std::string("illegal character '") + c + "'"});
    ++pos_;
    return false;
  }

  std::string_view text_;
  const SourceFile &file_;
  int pos_ = 0;
};

} // namespace

const char *tokenKindName(TokenKind kind) {
  switch (kind) {
  case TokenKind::Keyword:
    return "kw";
  case TokenKind::Identifier:
    return "ident";
  case TokenKind::Literal:
    return "lit";
  case TokenKind::Punctuator:
    return "punct";
  case TokenKind::EndOfFile:
    return "eof";
  }
  return "?";
}

bool isKeyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word)
      return true;
  return false;
}

LexResult tokenize(const SourceFile &file) {
  return Lexer(file.text(), file).run();
}

LexResult tokenize(std::string_view text, int file_id) {
  SourceFile file("<input>", std::string(text), file_id);
  return tokenize(file);
}

} // namespace minisa
