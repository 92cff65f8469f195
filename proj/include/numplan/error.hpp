#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace numplan {

enum class ErrorKind {
  IndexOutOfRange,
  DuplicateEffect,
  NonTotalInitialState,
  NonFiniteValue,
  DivisionByZero,
  NonFiniteResult,
  SyntaxError,
  UnsupportedFeature,
  UnknownObjectType,
  UnknownPredicateOrFunction,
  DuplicateObject,
  ArityMismatch,
  GroundingExplosion,
  UninitializedFunction,
  InvalidConfig,
  Io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DuplicateEffect: return "DuplicateEffect";
    case ErrorKind::NonTotalInitialState: return "NonTotalInitialState";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NonFiniteResult: return "NonFiniteResult";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorKind::UnknownObjectType: return "UnknownObjectType";
    case ErrorKind::UnknownPredicateOrFunction: return "UnknownPredicateOrFunction";
    case ErrorKind::DuplicateObject: return "DuplicateObject";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::GroundingExplosion: return "GroundingExplosion";
    case ErrorKind::UninitializedFunction: return "UninitializedFunction";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

struct SourcePos {
  std::size_t line = 0;
  std::size_t col = 0;
};

/// Every failure in the library is reported through this type. `detail` is
/// the payload a caller may want to match on (the feature name for
/// UnsupportedFeature, the symbol for UnknownPredicateOrFunction, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string detail = {},
        std::optional<SourcePos> pos = std::nullopt)
      : std::runtime_error(format(kind, message, pos)),
        kind_(kind),
        message_(std::move(message)),
        detail_(std::move(detail)),
        pos_(pos) {}

  ErrorKind kind() const { return kind_; }
  const std::string& message() const { return message_; }
  const std::string& detail() const { return detail_; }
  const std::optional<SourcePos>& position() const { return pos_; }

  /// `file:line:col: message`, or `file: message` without a position.
  std::string located(std::string_view file) const {
    std::string out(file);
    if (pos_) {
      out += ":" + std::to_string(pos_->line) + ":" + std::to_string(pos_->col);
    }
    out += ": ";
    out += message_;
    return out;
  }

 private:
  static std::string format(ErrorKind kind, const std::string& message,
                            const std::optional<SourcePos>& pos) {
    std::string out(to_string(kind));
    if (pos) {
      out += " at " + std::to_string(pos->line) + ":" + std::to_string(pos->col);
    }
    out += ": " + message;
    return out;
  }

  ErrorKind kind_;
  std::string message_;
  std::string detail_;
  std::optional<SourcePos> pos_;
};

}  // namespace numplan
