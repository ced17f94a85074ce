#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "paramsub/syntax.hpp"

namespace paramsub {

// Reference semantics used to test the engine. Depth counts unfoldings of
// constructor instances; every other rule shrinks the goal.

struct NoCounterexample {
  std::size_t depth;
};

struct Violation {
  std::vector<PathStep> path;
  TraceRule rule;
  std::string detail;
  std::size_t depth;  // unfoldings along `path`
};

struct RefuteOutcome {
  std::variant<NoCounterexample, Violation> result;

  bool refuted() const noexcept { return std::holds_alternative<Violation>(result); }
  const Violation& violation() const { return std::get<Violation>(result); }
};

// Bottom-up search of the structural rules with eager substitution. Among
// violations within `depth` unfoldings it returns one of least depth, the
// first in rule order, so raising the depth never changes a found path.
RefuteOutcome bounded_structural_refute(const Signature& sig, const NamedType& left, const NamedType& right,
                                        Variance variance, std::size_t depth);

// Same search over the parametric rules: an instance pushes its arguments
// onto the stacks, a parameter pair pops them, and a parameter against
// anything else is a violation.
RefuteOutcome bounded_parametric_refute(const Signature& sig, const NamedType& left, const SubstitutionStack& left_stack,
                                        const NamedType& right, const SubstitutionStack& right_stack,
                                        Variance variance, std::size_t depth);

// Exact decision for signatures whose constructors are all nullary and
// unquantified. Throws Error(NotMonomorphic).
bool mono_decide(const Signature& sig, ConstructorId left, ConstructorId right);

// Follows `path` from the goal under the structural rules. Returns the rule
// that has no instance at the end of the path, or nothing when the path is
// not a derivation path or ends at a goal some rule applies to.
std::optional<TraceRule> replay_structural(const Signature& sig, const NamedType& left, const NamedType& right,
                                           Variance variance, const std::vector<PathStep>& path);

}  // namespace paramsub
