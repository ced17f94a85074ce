#include "paramsub/error.hpp"

namespace paramsub {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::DuplicateDefinition: return "duplicate definition";
    case ErrorKind::DuplicateLabel: return "duplicate label";
    case ErrorKind::ArityMismatch: return "arity mismatch";
    case ErrorKind::UnboundIdentifier: return "unbound identifier";
    case ErrorKind::RecursiveAbbreviation: return "recursive abbreviation";
    case ErrorKind::NonContractiveDefinition: return "non-contractive definition";
    case ErrorKind::OpenTypeInQuery: return "open type in query";
    case ErrorKind::UnknownConstructor: return "unknown constructor";
    case ErrorKind::UnknownPair: return "unknown pair";
    case ErrorKind::FuelExhausted: return "fuel exhausted";
    case ErrorKind::NotMonomorphic: return "not monomorphic";
    case ErrorKind::InvalidSystem: return "invalid system";
    case ErrorKind::Internal: return "internal error";
  }
  return "error";
}

Error::Error(ErrorKind kind, std::string message, std::optional<Span> span)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      message_(std::move(message)),
      span_(span) {}

std::string Error::describe() const {
  std::string out;
  if (span_) {
    out += std::to_string(span_->begin.line) + ":" + std::to_string(span_->begin.column) + ": ";
  }
  out += to_string(kind_);
  out += ": ";
  out += message_;
  return out;
}

}  // namespace paramsub
