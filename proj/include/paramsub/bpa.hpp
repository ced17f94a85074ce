#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "paramsub/oracle.hpp"
#include "paramsub/syntax.hpp"

namespace paramsub {

// A process word: variable indices, left to right. Empty is ε.
using BpaWord = std::vector<std::uint32_t>;

struct BpaTerm {
  Label action;
  BpaWord next;
};

// X = a.p + b.q + ...
struct BpaEquation {
  std::string name;
  std::vector<BpaTerm> terms;
};

struct BpaSystem {
  std::vector<BpaEquation> equations;

  std::optional<std::uint32_t> find(std::string_view name) const;
};

// `X = a.eps + b.X.Y` per line, `--` comments. Throws Error(Syntax) or
// Error(InvalidSystem).
BpaSystem parse_bpa(std::string_view text);

// Throws Error(InvalidSystem): empty sum, repeated action in one equation,
// reference to an undefined variable, repeated variable.
void validate(const BpaSystem& sys);

// `X.Y` or `eps`.
BpaWord parse_word(const BpaSystem& sys, std::string_view text);
std::string format_word(const BpaSystem& sys, const BpaWord& word);
std::string format_bpa(const BpaSystem& sys);

enum class BpaFlavor : std::uint8_t { Record, RecordWithEnd, Variant };

// Name of the base type that ε translates to.
inline constexpr std::string_view kBpaBase = "t";

// `.poly` text: one unary constructor `t<X>[al]` per variable plus the base
// type. Throws Error(InvalidSystem).
std::string encode(const BpaSystem& sys, BpaFlavor flavor);

// Word translation over a surface type: ⟦ε⟧τ = τ, ⟦X·p⟧τ = tX[⟦p⟧τ].
std::string translate(const BpaSystem& sys, const BpaWord& word, std::string_view base = kBpaBase);

// The subtyping query that holds exactly when `p` is simulated by `q`:
// ⟦q⟧ <= ⟦p⟧ for the record flavors, ⟦p⟧ <= ⟦q⟧ for the variant flavor.
std::string simulation_query(const BpaSystem& sys, const BpaWord& p, const BpaWord& q, BpaFlavor flavor);

// One-step transitions of a word, in equation order.
std::vector<std::pair<Label, BpaWord>> transitions(const BpaSystem& sys, const BpaWord& word);

struct SimulationViolation {
  std::vector<Label> actions;  // the last one is unmatched
};

struct SimulationOutcome {
  std::variant<NoCounterexample, SimulationViolation> result;

  bool refuted() const noexcept { return std::holds_alternative<SimulationViolation>(result); }
  const SimulationViolation& violation() const { return std::get<SimulationViolation>(result); }
};

// Looks for a sequence of at most `depth` actions that `p` can take and `q`
// cannot follow. Breadth first, so a violation found at some depth is found
// with the same actions at every larger depth.
SimulationOutcome bounded_simulation_refute(const BpaSystem& sys, const BpaWord& p, const BpaWord& q,
                                            std::size_t depth);

}  // namespace paramsub
