#pragma once

// Word literal grammar shared by the file parser and the command line:
//
//   word  := term*  |  "1"
//   term  := ident [ "^" int ]  |  "(" word ")" [ "^" int ]
//
// Exponents are nonzero signed decimal integers. Words are freely reduced as
// they are read.

#include <cctype>
#include <charconv>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "gbsrf/error.hpp"
#include "gbsrf/words.hpp"

namespace gbsrf {

/// Upper bound on the number of letters a single literal may expand to.
inline constexpr std::size_t kMaxLiteralLength = std::size_t{1} << 24;

using GeneratorLookup = std::function<std::optional<Generator>(std::string const&)>;

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool starts_with(std::string_view tok) {
    skip_space();
    return text_.substr(pos_).starts_with(tok);
  }

  bool accept(std::string_view tok) {
    if (!starts_with(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail(ErrorKind::SyntaxError, "expected '" + std::string(tok) + "'");
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::optional<std::string> identifier() {
    skip_space();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) return std::nullopt;
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string expect_identifier(std::string_view what) {
    auto id = identifier();
    if (!id) fail(ErrorKind::SyntaxError, "expected " + std::string(what));
    return *id;
  }

  long integer() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (digits == pos_) {
      pos_ = start;
      fail(ErrorKind::SyntaxError, "expected integer");
    }
    std::string_view tok = text_.substr(start, pos_ - start);
    if (tok.front() == '+') tok.remove_prefix(1);
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc()) {
      pos_ = start;
      fail(ErrorKind::Overflow, "integer out of range");
    }
    return v;
  }

  std::size_t column() const { return pos_ + 1; }
  std::size_t line() const { return line_; }

  [[noreturn]] void fail(ErrorKind kind, std::string const& what) const {
    throw Error(kind, what, line_, pos_ + 1);
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

namespace detail {

inline Word read_exponent(Cursor& cur, Word body, std::size_t col) {
  if (!cur.accept("^")) return body;
  long k = cur.integer();
  if (k == 0) throw Error(ErrorKind::ZeroExponent, "exponent must be nonzero", cur.line(), col);
  unsigned long mag = k > 0 ? static_cast<unsigned long>(k)
                            : static_cast<unsigned long>(-(k + 1)) + 1;
  if (!body.empty() && mag > kMaxLiteralLength / body.size()) {
    throw Error(ErrorKind::Overflow, "word literal too long", cur.line(), col);
  }
  Word base = k > 0 ? std::move(body) : inverse(body);
  Word out;
  out.reserve(base.size() * mag);
  for (unsigned long i = 0; i < mag; ++i) {
    for (Letter l : base) push_reduced(out, l);
  }
  return out;
}

inline Word read_terms(Cursor& cur, GeneratorLookup const& lookup, bool nested) {
  Word out;
  for (;;) {
    char c = cur.peek();
    if (c == '\0') break;
    std::size_t col = cur.column();
    Word term;
    if (c == '(') {
      cur.expect("(");
      term = read_terms(cur, lookup, true);
      cur.expect(")");
    } else if (Cursor::ident_start(c)) {
      std::string id = *cur.identifier();
      auto g = lookup(id);
      if (!g) throw Error(ErrorKind::UnknownGenerator, "unknown generator '" + id + "'", cur.line(), col);
      term.push_back(Letter(*g, 1));
    } else if (c == '1' && out.empty()) {
      cur.expect("1");
      term = read_exponent(cur, Word{}, col);
      continue;
    } else if (c == ')' && nested) {
      break;
    } else {
      break;
    }
    term = read_exponent(cur, std::move(term), col);
    for (Letter l : term) push_reduced(out, l);
    if (out.size() > kMaxLiteralLength) {
      throw Error(ErrorKind::Overflow, "word literal too long", cur.line(), col);
    }
  }
  return out;
}

}  // namespace detail

/// Reads a word starting at the cursor, stopping at the first token that
/// cannot start a term (e.g. "->", "--" or end of input).
inline Word read_word(Cursor& cur, GeneratorLookup const& lookup) {
  return detail::read_terms(cur, lookup, false);
}

/// Parses a complete word literal; trailing garbage is a syntax error.
inline Word parse_word(std::string_view text, GeneratorLookup const& lookup,
                       std::size_t line = 0) {
  Cursor cur(text, line);
  Word w = read_word(cur, lookup);
  if (!cur.at_end()) cur.fail(ErrorKind::SyntaxError, "unexpected character in word");
  return w;
}

inline Word parse_word(std::string_view text, Alphabet const& alpha) {
  return parse_word(text, [&](std::string const& n) { return alpha.find(n); });
}

}  // namespace gbsrf
