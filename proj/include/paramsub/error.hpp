#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace paramsub {

struct SourcePos {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

struct Span {
  SourcePos begin;
  SourcePos end;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class ErrorKind {
  Syntax,
  DuplicateDefinition,
  DuplicateLabel,
  ArityMismatch,
  UnboundIdentifier,
  RecursiveAbbreviation,
  NonContractiveDefinition,
  OpenTypeInQuery,
  UnknownConstructor,
  UnknownPair,
  FuelExhausted,
  NotMonomorphic,
  InvalidSystem,
  Internal,
};

std::string_view to_string(ErrorKind kind);

// Every failure surfaced to callers: a kind, a message, and a source span when
// the failure points at input text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::optional<Span> span = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<Span>& span() const noexcept { return span_; }
  const std::string& message() const noexcept { return message_; }

  // "line:col: message" when positioned, otherwise just the message.
  std::string describe() const;

 private:
  ErrorKind kind_;
  std::string message_;
  std::optional<Span> span_;
};

}  // namespace paramsub
