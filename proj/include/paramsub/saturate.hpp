#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "paramsub/syntax.hpp"

namespace paramsub {

// ⟨τ ≤ξ σ⟩ with τ drawn from the left head's body and σ from the right's.
// The binder of a quantified body is opened to the free variable 0 on both
// sides, so α-equivalent judgments compare equal.
struct Judgment {
  NamedType left;
  NamedType right;
  Variance variance;

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

struct JudgmentHash {
  std::size_t operator()(const Judgment& j) const noexcept {
    return hash_combine(hash_combine(j.left.hash(), j.right.hash()), static_cast<std::size_t>(j.variance));
  }
};

using EntryId = std::uint32_t;

// Why a judgment is in an entry.
struct Provenance {
  enum class Kind : std::uint8_t { Init, Decompose, Compose };
  Kind kind = Kind::Init;
  std::uint32_t parent = 0;  // judgment in the same entry
  PathStep step;             // Decompose
  EntryId child = 0;         // Compose: the entry whose atom was instantiated
  std::uint32_t child_judgment = 0;
};

struct JudgmentRecord {
  // Empty for the entry's seed ⟨A ≤ B⟩ between the two structural bodies.
  std::optional<Judgment> judgment;
  Provenance provenance;
};

struct Consumer {
  EntryId entry;
  std::uint32_t judgment;  // the t′[θ′] ≤ u′[φ′] judgment that referenced us
  Substitution left;       // θ′
  Substitution right;      // φ′
};

struct BottomCause {
  std::optional<TraceRule> rule;  // empty for a COMPOSE⊥ link
  std::uint32_t judgment = 0;
  EntryId child = 0;  // COMPOSE⊥ only
  std::string detail;
};

struct Entry {
  PairKey key;
  std::vector<JudgmentRecord> judgments;  // index 0 is the seed
  std::unordered_map<Judgment, std::uint32_t, JudgmentHash> index;
  std::map<Atom, std::uint32_t> atoms;  // atom → the judgment that produced it
  std::optional<BottomCause> bottom;
  std::vector<Consumer> consumers;
  std::size_t processed = 0;
  std::size_t bound = 0;  // 2·|sub(A)|·|sub(B)|
};

// A pair's most general parametric rule, or the reason none exists.
class Rule {
 public:
  static Rule valid(std::vector<Atom> atoms) { return Rule(std::move(atoms)); }
  static Rule invalid(RefutationTrace trace) { return Rule(std::move(trace)); }

  bool is_valid() const noexcept { return std::holds_alternative<std::vector<Atom>>(state_); }
  const std::vector<Atom>& atoms() const { return std::get<std::vector<Atom>>(state_); }
  const RefutationTrace& trace() const { return std::get<RefutationTrace>(state_); }

 private:
  explicit Rule(std::variant<std::vector<Atom>, RefutationTrace> s) : state_(std::move(s)) {}
  std::variant<std::vector<Atom>, RefutationTrace> state_;
};

struct SaturationOptions {
  // Present: pick worklist items in a seeded random order instead of FIFO.
  std::optional<std::uint64_t> seed;
  // Overrides the safety fuel (4 × the sum of per-pair bounds).
  std::optional<std::size_t> max_facts;
};

// Demand-driven forward inference over pairs of constructors. The database
// keeps every derivable judgment and atom, also for pairs that are already ⊥,
// so its contents are independent of the worklist order.
//
// Holds a reference to the signature, which must outlive it. Definitions may
// be appended to the signature between calls.
class FactDatabase {
 public:
  explicit FactDatabase(const Signature& sig, SaturationOptions options = {});

  // Seeds the pair on first use; idempotent. Throws Error(UnknownConstructor).
  EntryId demand(const PairKey& key);
  // Processes one worklist item; false when the worklist is empty.
  bool step();
  // Drains the worklist. Throws Error(FuelExhausted).
  void run();
  bool saturated() const noexcept { return worklist_.empty(); }

  const Signature& signature() const noexcept { return *sig_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const Entry& entry(EntryId id) const { return entries_.at(id); }
  std::optional<EntryId> find(const PairKey& key) const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  ConstraintSet constraints(EntryId id) const;
  // Throws Error(UnknownPair) when the pair was never demanded.
  Rule rule_of(const PairKey& key) const;
  RefutationTrace trace(EntryId id) const;

  // Steps from the pair's unfolded bodies down to the judgment, expressed as
  // a structural derivation path (with unfoldings into other pairs).
  std::vector<PathStep> path_to(EntryId id, std::uint32_t judgment) const;
  // Path from the pair's unfolded bodies to the point where ⊥ was derived.
  std::vector<PathStep> failure_path(EntryId id) const;

  // Printed with the pair's parameter names (right side primed on clashes).
  std::string format_judgment(EntryId id, std::uint32_t judgment) const;
  std::string format_key(const PairKey& key) const;

  std::size_t processed_total() const noexcept { return processed_total_; }
  std::size_t fuel() const noexcept;
  // |sub(A)|: distinct subformulas of the body, the body itself included.
  std::size_t subformula_count(ConstructorId id) const;

 private:
  struct Task {
    EntryId entry;
    std::uint32_t judgment;
  };

  void enqueue(EntryId e, const Judgment& j, const Provenance& p);
  void process(EntryId e, std::uint32_t j);
  void process_seed(EntryId e);
  void process_named(EntryId e, std::uint32_t j, const Judgment& jm);
  void add_atom(EntryId e, const Atom& a, std::uint32_t origin);
  void add_consumer(EntryId child, Consumer c);
  void set_bottom(EntryId e, BottomCause cause);
  void append_path(EntryId id, std::uint32_t judgment, std::vector<PathStep>& out) const;

  const Signature* sig_;
  SaturationOptions options_;
  std::vector<Entry> entries_;
  std::unordered_map<PairKey, EntryId, PairKeyHash> by_key_;
  std::deque<Task> worklist_;
  std::mt19937_64 rng_;
  std::size_t processed_total_ = 0;
  std::size_t bound_total_ = 0;
  mutable std::unordered_map<ConstructorId, std::size_t> sub_counts_;
};

// Demands every root and runs to saturation.
FactDatabase saturate(const Signature& sig, std::span<const PairKey> roots, SaturationOptions options = {});

// Every pair of user constructors at both variances.
std::vector<PairKey> all_user_pairs(const Signature& sig);

}  // namespace paramsub
