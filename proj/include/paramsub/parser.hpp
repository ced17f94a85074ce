#pragma once

#include <string_view>

#include "paramsub/surface.hpp"

namespace paramsub {

// Parses a `.poly` file. Throws Error (Syntax, DuplicateDefinition,
// DuplicateLabel, ArityMismatch, UnboundIdentifier) positioned at the first
// problem.
SourceFile parse_signature(std::string_view text);

// Parses `ty <= ty` or `ty >= ty` (the latter swaps sides). Constructor
// references are resolved against `scope`.
Query parse_query(std::string_view text, const SourceFile& scope);

// A single closed type, resolved against `scope`.
SurfaceType parse_type(std::string_view text, const SourceFile& scope);

}  // namespace paramsub
