#pragma once

#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "paramsub/format.hpp"
#include "paramsub/saturate.hpp"
#include "paramsub/syntax.hpp"

namespace paramsub {

struct DerivationChild;

struct ComposeNode {
  PairKey key;
  NamedType left;
  NamedType right;
  std::vector<DerivationChild> children;  // one per atom of the pair's rule
};

// B-VAR: a variable against itself.
struct VarNode {
  NamedType var;
};

struct Derivation {
  std::variant<ComposeNode, VarNode> node;
};

struct DerivationChild {
  Atom atom;
  Derivation derivation;
};

enum class ReasonKind : std::uint8_t { Parametricity, Structural, Shape };

std::string_view to_string(ReasonKind k) noexcept;

// One enclosing B-COMPOSE step on the way to a failing subgoal.
struct QueryContext {
  PairKey key;
  Atom atom;
};

struct Refutation {
  ReasonKind kind;
  RefutationTrace trace;
  // The subgoal that failed, possibly nested inside the original query.
  NamedType left;
  NamedType right;
  Variance variance;
  std::vector<QueryContext> context;
  // Structural derivation path from the original query to the violation.
  std::vector<PathStep> path;
};

struct Verdict {
  std::variant<Derivation, Refutation> result;

  bool yes() const noexcept { return std::holds_alternative<Derivation>(result); }
  const Derivation& derivation() const { return std::get<Derivation>(result); }
  const Refutation& refutation() const { return std::get<Refutation>(result); }
};

// Backward proof construction. Demands and saturates the pairs it needs.
// Throws Error(OpenTypeInQuery) when either side mentions a parameter.
Verdict check(FactDatabase& db, const NamedType& left, const NamedType& right, Variance variance = Variance::Plus);

// Serializes lazy saturation for callers that share one database.
class Checker {
 public:
  explicit Checker(const Signature& sig, SaturationOptions options = {}) : db_(sig, options) {}

  Verdict check(const NamedType& left, const NamedType& right, Variance variance = Variance::Plus);
  const FactDatabase& database() const noexcept { return db_; }

 private:
  std::mutex mutex_;
  FactDatabase db_;
};

// Yes: the proof tree, one rule per line. No: the refutation trace.
// `names.var` spells free variables.
std::string explain(const Signature& sig, const Verdict& v, const Names& names = {});

// Number of ComposeNode/VarNode nodes.
std::size_t node_count(const Derivation& d);

}  // namespace paramsub
