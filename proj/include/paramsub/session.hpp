#pragma once

#include <string_view>

#include "paramsub/elaborate.hpp"
#include "paramsub/surface.hpp"
#include "paramsub/syntax.hpp"

namespace paramsub {

struct ClosedQuery {
  NamedType left;
  NamedType right;
  Variance variance = Variance::Plus;
};

// A parsed and normalized `.poly` file that further closed types can be
// elaborated against. Pinned in memory: fact databases keep a reference to
// signature().
class Session {
 public:
  explicit Session(std::string_view text, NormalizeOptions options = {});
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const SourceFile& source() const noexcept { return source_; }
  const Signature& signature() const noexcept { return elab_.signature(); }

  // `ty <= ty` or `ty >= ty`; may mint internal definitions.
  ClosedQuery query(std::string_view text);
  NamedType type(std::string_view text);
  // Throws Error(UnknownConstructor).
  ConstructorId constructor(std::string_view name) const { return signature().require(name); }

 private:
  SourceFile source_;
  Elaborator elab_;
};

}  // namespace paramsub
