#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gbsrf {

enum class ErrorKind {
  TrivialWord,
  NonPrimitiveBase,
  SyntaxError,
  ZeroExponent,
  EmptyEdgeWord,
  DuplicateId,
  UnknownVertex,
  UnknownGenerator,
  TrivialEdgeWord,
  NotPinchFree,
  NotNormalizable,
  EmptyCycle,
  CertificateSearchExhausted,
  UnknownCell,
  IllFormedMap,
  NotCoprime,
  BadParameters,
  UnknownLabel,
  ContractViolation,
  Overflow,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::TrivialWord: return "TrivialWord";
    case ErrorKind::NonPrimitiveBase: return "NonPrimitiveBase";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ZeroExponent: return "ZeroExponent";
    case ErrorKind::EmptyEdgeWord: return "EmptyEdgeWord";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::UnknownGenerator: return "UnknownGenerator";
    case ErrorKind::TrivialEdgeWord: return "TrivialEdgeWord";
    case ErrorKind::NotPinchFree: return "NotPinchFree";
    case ErrorKind::NotNormalizable: return "NotNormalizable";
    case ErrorKind::EmptyCycle: return "EmptyCycle";
    case ErrorKind::CertificateSearchExhausted: return "CertificateSearchExhausted";
    case ErrorKind::UnknownCell: return "UnknownCell";
    case ErrorKind::IllFormedMap: return "IllFormedMap";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::ContractViolation: return "ContractViolation";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Unknown";
}

/// Every failure raised by the library. `line`/`column` are 1-based and zero
/// when the error has no source position.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string const& what, std::size_t line = 0,
        std::size_t column = 0)
      : std::runtime_error(compose(kind, what, line, column)),
        kind_(kind),
        line_(line),
        column_(column) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string compose(ErrorKind kind, std::string const& what,
                             std::size_t line, std::size_t column) {
    std::ostringstream os;
    if (line != 0) {
      os << "line " << line;
      if (column != 0) os << ", column " << column;
      os << ": ";
    }
    os << to_string(kind) << ": " << what;
    return os.str();
  }

  ErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

inline long checked_mul(long a, long b) {
  long r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw Error(ErrorKind::Overflow, "integer overflow in exponent arithmetic");
  }
  return r;
}

inline long checked_add(long a, long b) {
  long r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw Error(ErrorKind::Overflow, "integer overflow in exponent arithmetic");
  }
  return r;
}

}  // namespace detail

}  // namespace gbsrf
