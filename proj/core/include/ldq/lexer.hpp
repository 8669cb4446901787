#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldq/terms.hpp"

namespace ldq {

struct Token {
  std::string text;  // unescaped content for quoted tokens
  bool quoted = false;
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in bytes
  std::size_t offset = 0;  // byte offset into the lexed text
};

// Whitespace-separated tokens; a token starting with '"' runs to the
// matching unescaped '"' and may contain whitespace. Throws ParseError on an
// unterminated literal, an unknown escape, or a quote glued to other text.
class Lexer {
 public:
  explicit Lexer(std::string_view text, std::size_t first_line = 1)
      : text_(text), line_(first_line) {}

  std::optional<Token> Next();
  const std::optional<Token>& Peek();
  std::size_t offset() const { return pos_; }
  bool AtEnd();

 private:
  void SkipSpace();

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t line_start_ = 0;
  std::optional<Token> peeked_;
  bool has_peeked_ = false;
};

std::vector<Token> TokenizeLine(std::string_view line, std::size_t line_no);

// Quoted token -> Literal, otherwise Identifier. Throws ParseError.
Term TermFromToken(const Token& tok);
Identifier IdentifierFromToken(const Token& tok);
// As TermFromToken, but '?name' -> Variable.
PatternTerm PatternTermFromToken(const Token& tok);

// Splits on '\n', stripping a trailing '\r' from each line.
std::vector<std::string_view> SplitLines(std::string_view text);

// True for blank lines and lines whose first non-blank byte is '#'.
bool IsCommentOrBlank(std::string_view line);

}  // namespace ldq
