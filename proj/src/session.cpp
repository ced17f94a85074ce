#include "paramsub/session.hpp"

#include "paramsub/parser.hpp"

namespace paramsub {

Session::Session(std::string_view text, NormalizeOptions options)
    : source_(parse_signature(text)), elab_(options) {
  elab_.add_definitions(expand_abbreviations(source_));
}

ClosedQuery Session::query(std::string_view text) {
  Query q = parse_query(text, source_);
  NamedType left = elab_.elaborate_closed(expand_abbreviations(source_, q.left));
  NamedType right = elab_.elaborate_closed(expand_abbreviations(source_, q.right));
  return ClosedQuery{left, right, q.variance};
}

NamedType Session::type(std::string_view text) {
  return elab_.elaborate_closed(expand_abbreviations(source_, parse_type(text, source_)));
}

}  // namespace paramsub
