#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "paramsub/surface.hpp"
#include "paramsub/syntax.hpp"

namespace paramsub {

// Inlines every abbreviation and drops abbreviation items. Throws
// Error(RecursiveAbbreviation) naming the cycle.
SourceFile expand_abbreviations(const SourceFile& file);
// Inlines the abbreviations of `scope` into a single type (e.g. a query side).
SurfaceType expand_abbreviations(const SourceFile& scope, const SurfaceType& t);

struct NormalizeOptions {
  // Reuse an internal definition whose body matches up to parameter renaming.
  bool share = true;
};

// Incremental normalizer: accepts definitions, then further closed types
// (query sides), minting internal definitions `%g<n>` as needed.
class Elaborator {
 public:
  explicit Elaborator(NormalizeOptions options = {});

  // Input must be free of abbreviations. Throws
  // Error(NonContractiveDefinition) when a body is not structural.
  void add_definitions(const SourceFile& expanded);

  // (T)† for a closed surface type.
  NamedType elaborate_closed(const SurfaceType& t);

  const Signature& signature() const noexcept { return sig_; }
  Signature& signature() noexcept { return sig_; }

 private:
  struct Scope;

  StructuralType star(const SurfaceType& t, Scope& scope);
  NamedType dagger(const SurfaceType& t, Scope& scope);
  NamedType mint(const StructuralType& body, Scope& scope);

  NormalizeOptions options_;
  Signature sig_;
  std::unordered_map<StructuralType, ConstructorId, StructuralTypeHash> shared_;
  std::vector<std::string> param_hints_;  // indexed by working parameter id
  std::size_t counter_ = 0;
};

Signature normalize_signature(const SourceFile& expanded, NormalizeOptions options = {});

// Convenience: expand, normalize.
Signature elaborate(const SourceFile& file, NormalizeOptions options = {});

struct Diagnostic {
  std::string subject;  // the definition concerned
  std::string message;
};

// Checks closedness, arity agreement and variable scoping of a normal-form
// signature. Empty result means well-formed.
std::vector<Diagnostic> validate(const Signature& sig);

// Checks that a surface signature is already in normal form: every body is
// structural at the top and has only named immediate subformulas.
std::vector<Diagnostic> check_normal_form(const SourceFile& file);

// The normal-form signature as surface definitions (inverse of normalization
// on already-normal input).
SourceFile to_surface(const Signature& sig);

}  // namespace paramsub
