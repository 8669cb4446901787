#include "ldq/lexer.hpp"

#include "ldq/errors.hpp"

namespace ldq {
namespace {

bool IsBlank(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

}  // namespace

void Lexer::SkipSpace() {
  while (pos_ < text_.size() && IsBlank(text_[pos_])) {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }
}

bool Lexer::AtEnd() { return !Peek().has_value(); }

const std::optional<Token>& Lexer::Peek() {
  if (!has_peeked_) {
    peeked_ = Next();
    has_peeked_ = true;
  }
  return peeked_;
}

std::optional<Token> Lexer::Next() {
  if (has_peeked_) {
    has_peeked_ = false;
    return std::move(peeked_);
  }
  SkipSpace();
  if (pos_ >= text_.size()) return std::nullopt;

  Token tok;
  tok.line = line_;
  tok.column = pos_ - line_start_ + 1;
  tok.offset = pos_;

  if (text_[pos_] != '"') {
    std::size_t start = pos_;
    while (pos_ < text_.size() && !IsBlank(text_[pos_])) {
      if (text_[pos_] == '"') {
        throw ParseError("unexpected '\"' inside token", line_,
                         pos_ - line_start_ + 1);
      }
      ++pos_;
    }
    tok.text = std::string(text_.substr(start, pos_ - start));
    return tok;
  }

  tok.quoted = true;
  ++pos_;
  while (true) {
    if (pos_ >= text_.size() || text_[pos_] == '\n') {
      throw ParseError("unterminated literal", tok.line, tok.column);
    }
    char c = text_[pos_++];
    if (c == '"') break;
    if (c != '\\') {
      tok.text.push_back(c);
      continue;
    }
    if (pos_ >= text_.size()) {
      throw ParseError("unterminated literal", tok.line, tok.column);
    }
    char e = text_[pos_++];
    switch (e) {
      case '"':
        tok.text.push_back('"');
        break;
      case '\\':
        tok.text.push_back('\\');
        break;
      case 'n':
        tok.text.push_back('\n');
        break;
      case 't':
        tok.text.push_back('\t');
        break;
      case 'r':
        tok.text.push_back('\r');
        break;
      default:
        throw ParseError(std::string("unknown escape '\\") + e + "'", line_,
                         pos_ - line_start_ - 1);
    }
  }
  if (pos_ < text_.size() && !IsBlank(text_[pos_])) {
    throw ParseError("literal must be followed by whitespace", line_,
                     pos_ - line_start_ + 1);
  }
  return tok;
}

std::vector<Token> TokenizeLine(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  Lexer lex(line, line_no);
  while (auto tok = lex.Next()) out.push_back(std::move(*tok));
  return out;
}

Identifier IdentifierFromToken(const Token& tok) {
  if (tok.quoted) {
    throw ParseError("expected identifier, found literal", tok.line,
                     tok.column);
  }
  try {
    return Identifier(tok.text);
  } catch (const InvalidValue& e) {
    throw ParseError(e.what(), tok.line, tok.column);
  }
}

Term TermFromToken(const Token& tok) {
  if (tok.quoted) return Literal(tok.text);
  return IdentifierFromToken(tok);
}

PatternTerm PatternTermFromToken(const Token& tok) {
  if (!tok.quoted && !tok.text.empty() && tok.text.front() == '?') {
    try {
      return Variable(tok.text.substr(1));
    } catch (const InvalidValue& e) {
      throw ParseError(e.what(), tok.line, tok.column);
    }
  }
  return PatternTerm(TermFromToken(tok));
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

bool IsCommentOrBlank(std::string_view line) {
  for (char c : line) {
    if (IsBlank(c)) continue;
    return c == '#';
  }
  return true;
}

}  // namespace ldq
