#pragma once

#include <string>
#include <vector>

#include "paramsub/surface.hpp"
#include "paramsub/syntax.hpp"

namespace paramsub {

// How to spell parameters and variables when printing normal forms.
struct Names {
  std::vector<std::string> params;
  // Spelling for the binder variable (bound index 0) and for free variables
  // with id 0; other free ids print as "z<id>".
  std::string var = "z";
};

std::string format(const Signature& sig, const NamedType& t, const Names& names = {});
std::string format(const Signature& sig, const StructuralType& s, const Names& names = {});
// `type t[a, b] = A`
std::string format_definition(const Signature& sig, ConstructorId id);
std::string format_signature(const Signature& sig);
// `t[a, b]` with the declared parameter names.
std::string format_head(const Signature& sig, ConstructorId id, const std::vector<std::string>& params);

// `t[a] <= u[b']` (or `>=` for Minus) with declared parameter names.
std::string format_pair(const Signature& sig, const PairKey& key);

// Right-hand parameter names for printing a pair: declared names, primed
// until none collides with a left-hand name.
std::vector<std::string> right_names(const std::vector<std::string>& left, const std::vector<std::string>& right);

// "a <= b'" for Plus, "b' <= a" for Minus.
std::string format_atom(const Atom& a, const std::vector<std::string>& left, const std::vector<std::string>& right);

std::string format(const SurfaceType& t, const std::vector<std::string>& params = {},
                   const std::vector<std::string>& binders = {});
std::string format(const SourceFile& file);
std::string format(const Query& q);

}  // namespace paramsub
