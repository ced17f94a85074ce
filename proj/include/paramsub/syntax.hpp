#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace paramsub {

enum class Variance : std::uint8_t { Plus, Minus };

constexpr Variance negate(Variance v) noexcept {
  return v == Variance::Plus ? Variance::Minus : Variance::Plus;
}

// "+" or "-".
std::string_view to_string(Variance v) noexcept;

using Label = std::string;

// Sorted and duplicate-free.
using LabelSet = std::vector<Label>;

// Plus: l is a subset of k. Minus: l is a superset of k.
bool label_subset(const LabelSet& l, const LabelSet& k, Variance v);

using ConstructorId = std::uint32_t;

// t[θ], a parameter α (positional index into the enclosing definition's
// parameters) or a quantified variable. Variables are locally nameless: a
// bound variable is a de Bruijn index, a free one carries an opaque id that
// was introduced when a binder was opened.
class NamedType {
 public:
  enum class Kind : std::uint8_t { Inst, Param, BoundVar, FreeVar };

  static NamedType inst(ConstructorId head, std::vector<NamedType> args = {});
  static NamedType param(std::uint32_t index);
  static NamedType bound(std::uint32_t depth);
  static NamedType free(std::uint32_t id);

  Kind kind() const noexcept;
  bool is_inst() const noexcept { return kind() == Kind::Inst; }
  bool is_param() const noexcept { return kind() == Kind::Param; }
  bool is_var() const noexcept { return kind() == Kind::BoundVar || kind() == Kind::FreeVar; }

  ConstructorId head() const;
  const std::vector<NamedType>& args() const;
  // Parameter index, de Bruijn index or free id depending on kind().
  std::uint32_t index() const;

  std::size_t hash() const noexcept;
  std::size_t size() const noexcept;

  friend bool operator==(const NamedType& a, const NamedType& b) noexcept;

 private:
  struct Node;
  explicit NamedType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct NamedTypeHash {
  std::size_t operator()(const NamedType& t) const noexcept { return t.hash(); }
};

// Positional: entry i instantiates parameter i of the head.
using Substitution = std::vector<NamedType>;

NamedType substitute(const NamedType& t, const Substitution& theta);
// Replaces the variable bound by the nearest enclosing binder.
NamedType open(const NamedType& t, const NamedType& replacement);
bool has_params(const NamedType& t);
bool has_bound_vars(const NamedType& t);

struct Field {
  Label label;
  NamedType type;
};

struct Product {
  NamedType left;
  NamedType right;
};
struct Unit {};
struct Variant {
  std::vector<Field> fields;  // sorted by label
};
struct Record {
  std::vector<Field> fields;  // sorted by label
};
struct Arrow {
  NamedType domain;
  NamedType codomain;
};
struct Forall {
  std::string binder;  // display hint only
  NamedType body;
};
struct Exists {
  std::string binder;
  NamedType body;
};

using StructuralType = std::variant<Product, Unit, Variant, Record, Arrow, Forall, Exists>;

// Sorts by label; throws Error(DuplicateLabel) on repeats.
std::vector<Field> make_fields(std::vector<Field> fields);
LabelSet labels_of(const std::vector<Field>& fields);
const NamedType* find_field(const std::vector<Field>& fields, std::string_view label);

// "×", "1", "⊕", "&", "→", "∀", "∃".
std::string_view head_symbol(const StructuralType& s) noexcept;

StructuralType substitute(const StructuralType& s, const Substitution& theta);

// Binder hints are ignored: equality is up to α-renaming.
bool operator==(const StructuralType& a, const StructuralType& b);
std::size_t hash_value(const StructuralType& s);

struct StructuralTypeHash {
  std::size_t operator()(const StructuralType& s) const { return hash_value(s); }
};

// Immediate named children in a fixed left-to-right order.
std::vector<NamedType> children(const StructuralType& s);

enum class Origin : std::uint8_t { User, Internal };

struct Definition {
  std::string name;
  std::vector<std::string> params;
  StructuralType body;
  Origin origin = Origin::User;
};

// Normal-form signature: exactly one structural definition per constructor.
class Signature {
 public:
  // Throws Error(DuplicateDefinition).
  ConstructorId add(Definition def);
  // Replaces the body of an existing definition (used while elaborating
  // mutually recursive definitions).
  void set_body(ConstructorId id, StructuralType body);

  const Definition& at(ConstructorId id) const;
  std::optional<ConstructorId> find(std::string_view name) const;
  // Throws Error(UnknownConstructor).
  ConstructorId require(std::string_view name) const;

  std::size_t size() const noexcept { return defs_.size(); }
  std::size_t internal_count() const noexcept;
  const std::vector<Definition>& definitions() const noexcept { return defs_; }

 private:
  std::vector<Definition> defs_;
  std::unordered_map<std::string, ConstructorId> by_name_;
};

// ⟨α_left ≤ζ β_right⟩, indices into the two heads' parameter lists.
struct Atom {
  std::uint32_t left = 0;
  Variance variance = Variance::Plus;
  std::uint32_t right = 0;

  friend bool operator==(const Atom&, const Atom&) = default;
  // Plus atoms first, then by left and right index.
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) noexcept;
};

struct PairKey {
  ConstructorId left = 0;
  ConstructorId right = 0;
  Variance variance = Variance::Plus;

  friend bool operator==(const PairKey&, const PairKey&) = default;
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept;
};

// One step in a structural derivation, read bottom-up.
struct PathStep {
  // Pop: a parameter lookup through substitution stacks.
  enum class Kind : std::uint8_t { Unfold, Left, Right, Field, Domain, Codomain, Open, Pop };
  Kind kind = Kind::Unfold;
  Label label;  // Field only

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

std::string to_string(const PathStep& step);
std::string to_string(const std::vector<PathStep>& path);

enum class TraceRule : std::uint8_t {
  Mismatch,
  VariantLabels,
  RecordLabels,
  ParamLeft,
  ParamRight,
  VarLeft,
  VarRight,
  Shape,
};

// Display name, e.g. "⊕⊕" or "PARAM-L".
std::string_view rule_name(TraceRule rule) noexcept;
// Stable machine name, e.g. "variant-labels".
std::string_view rule_id(TraceRule rule) noexcept;
bool is_parametricity_rule(TraceRule rule) noexcept;

struct TraceStep {
  std::optional<PairKey> key;  // empty for a query whose heads do not form a pair
  std::string judgment;
};

// Every step but the last is a COMPOSE⊥ link into the next pair; the last
// step is the judgment at which `rule` fired.
struct RefutationTrace {
  std::vector<TraceStep> steps;
  TraceRule rule = TraceRule::Mismatch;
  std::string detail;
};

class ConstraintSet {
 public:
  ConstraintSet() = default;  // ⊤
  static ConstraintSet bottom(RefutationTrace trace);

  bool is_bottom() const noexcept { return std::holds_alternative<RefutationTrace>(state_); }
  bool is_top() const noexcept { return !is_bottom() && atoms().empty(); }
  // Sorted. Empty when bottom.
  const std::vector<Atom>& atoms() const noexcept;
  const RefutationTrace& trace() const;

  // Returns whether the set changed. Bottom absorbs everything.
  bool insert(const Atom& a);

  // Traces do not participate.
  friend bool operator==(const ConstraintSet& a, const ConstraintSet& b);

 private:
  std::variant<std::vector<Atom>, RefutationTrace> state_;
};

std::pair<ConstraintSet, bool> add_atom(ConstraintSet c, const Atom& a);

// Π: a persistent stack of substitutions, innermost on top.
class SubstitutionStack {
 public:
  SubstitutionStack() = default;

  SubstitutionStack push(Substitution theta) const;
  bool empty() const noexcept { return !top_; }
  const Substitution& top() const;
  SubstitutionStack pop() const;
  std::size_t depth() const noexcept;
  std::size_t hash() const noexcept;

  friend bool operator==(const SubstitutionStack& a, const SubstitutionStack& b) noexcept;

 private:
  struct Frame;
  explicit SubstitutionStack(std::shared_ptr<const Frame> top) : top_(std::move(top)) {}
  std::shared_ptr<const Frame> top_;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) noexcept {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4));
}

}  // namespace paramsub

template <>
struct std::hash<paramsub::NamedType> {
  std::size_t operator()(const paramsub::NamedType& t) const noexcept { return t.hash(); }
};
