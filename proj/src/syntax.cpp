#include "paramsub/syntax.hpp"

#include <algorithm>
#include <functional>

#include "paramsub/error.hpp"
#include "paramsub/overloaded.hpp"

namespace paramsub {

std::string_view to_string(Variance v) noexcept { return v == Variance::Plus ? "+" : "-"; }

bool label_subset(const LabelSet& l, const LabelSet& k, Variance v) {
  if (v == Variance::Plus) return std::includes(k.begin(), k.end(), l.begin(), l.end());
  return std::includes(l.begin(), l.end(), k.begin(), k.end());
}

struct NamedType::Node {
  Kind kind;
  std::uint32_t index;
  std::vector<NamedType> args;
  std::size_t hash;
  std::size_t size;
};

namespace {

std::size_t leaf_hash(NamedType::Kind kind, std::uint32_t index) {
  return hash_combine(static_cast<std::size_t>(kind) * 0x51ed27ULL + 17, index);
}

}  // namespace

NamedType NamedType::inst(ConstructorId head, std::vector<NamedType> args) {
  std::size_t h = leaf_hash(Kind::Inst, head);
  std::size_t size = 1;
  for (const auto& a : args) {
    h = hash_combine(h, a.hash());
    size += a.size();
  }
  return NamedType(std::make_shared<const Node>(Node{Kind::Inst, head, std::move(args), h, size}));
}

NamedType NamedType::param(std::uint32_t index) {
  return NamedType(std::make_shared<const Node>(Node{Kind::Param, index, {}, leaf_hash(Kind::Param, index), 1}));
}

NamedType NamedType::bound(std::uint32_t depth) {
  return NamedType(
      std::make_shared<const Node>(Node{Kind::BoundVar, depth, {}, leaf_hash(Kind::BoundVar, depth), 1}));
}

NamedType NamedType::free(std::uint32_t id) {
  return NamedType(std::make_shared<const Node>(Node{Kind::FreeVar, id, {}, leaf_hash(Kind::FreeVar, id), 1}));
}

NamedType::Kind NamedType::kind() const noexcept { return node_->kind; }

ConstructorId NamedType::head() const {
  if (node_->kind != Kind::Inst) throw Error(ErrorKind::Internal, "head() on a non-instantiation");
  return node_->index;
}

const std::vector<NamedType>& NamedType::args() const {
  if (node_->kind != Kind::Inst) throw Error(ErrorKind::Internal, "args() on a non-instantiation");
  return node_->args;
}

std::uint32_t NamedType::index() const { return node_->index; }
std::size_t NamedType::hash() const noexcept { return node_->hash; }
std::size_t NamedType::size() const noexcept { return node_->size; }

bool operator==(const NamedType& a, const NamedType& b) noexcept {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.index != y.index || x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (!(x.args[i] == y.args[i])) return false;
  }
  return true;
}

namespace {

// Rebuilds t bottom-up, sharing unchanged subtrees.
NamedType rewrite(const NamedType& t, const std::function<std::optional<NamedType>(const NamedType&)>& leaf) {
  if (!t.is_inst()) {
    auto r = leaf(t);
    return r ? *r : t;
  }
  const auto& args = t.args();
  std::vector<NamedType> out;
  bool changed = false;
  out.reserve(args.size());
  for (const auto& a : args) {
    out.push_back(rewrite(a, leaf));
    if (!(out.back() == a)) changed = true;
  }
  return changed ? NamedType::inst(t.head(), std::move(out)) : t;
}

template <class Pred>
bool any_leaf(const NamedType& t, Pred pred) {
  if (!t.is_inst()) return pred(t);
  for (const auto& a : t.args()) {
    if (any_leaf(a, pred)) return true;
  }
  return false;
}

}  // namespace

NamedType substitute(const NamedType& t, const Substitution& theta) {
  return rewrite(t, [&](const NamedType& leaf) -> std::optional<NamedType> {
    if (!leaf.is_param()) return std::nullopt;
    if (leaf.index() >= theta.size()) throw Error(ErrorKind::Internal, "parameter outside substitution domain");
    return theta[leaf.index()];
  });
}

NamedType open(const NamedType& t, const NamedType& replacement) {
  return rewrite(t, [&](const NamedType& leaf) -> std::optional<NamedType> {
    if (leaf.kind() == NamedType::Kind::BoundVar && leaf.index() == 0) return replacement;
    return std::nullopt;
  });
}

bool has_params(const NamedType& t) {
  return any_leaf(t, [](const NamedType& l) { return l.is_param(); });
}

bool has_bound_vars(const NamedType& t) {
  return any_leaf(t, [](const NamedType& l) { return l.kind() == NamedType::Kind::BoundVar; });
}

std::vector<Field> make_fields(std::vector<Field> fields) {
  std::stable_sort(fields.begin(), fields.end(), [](const Field& a, const Field& b) { return a.label < b.label; });
  for (std::size_t i = 1; i < fields.size(); ++i) {
    if (fields[i].label == fields[i - 1].label) {
      throw Error(ErrorKind::DuplicateLabel, "label '" + fields[i].label + "' appears twice");
    }
  }
  return fields;
}

LabelSet labels_of(const std::vector<Field>& fields) {
  LabelSet out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(f.label);
  return out;
}

const NamedType* find_field(const std::vector<Field>& fields, std::string_view label) {
  auto it = std::lower_bound(fields.begin(), fields.end(), label,
                             [](const Field& f, std::string_view l) { return f.label < l; });
  if (it == fields.end() || it->label != label) return nullptr;
  return &it->type;
}

namespace {

std::vector<Field> substitute_fields(const std::vector<Field>& fields, const Substitution& theta) {
  std::vector<Field> out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(Field{f.label, substitute(f.type, theta)});
  return out;
}

bool fields_equal(const std::vector<Field>& a, const std::vector<Field>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].label != b[i].label || !(a[i].type == b[i].type)) return false;
  }
  return true;
}

std::size_t fields_hash(std::size_t h, const std::vector<Field>& fields) {
  for (const auto& f : fields) {
    h = hash_combine(h, std::hash<std::string>{}(f.label));
    h = hash_combine(h, f.type.hash());
  }
  return h;
}

}  // namespace

std::string_view head_symbol(const StructuralType& s) noexcept {
  static constexpr std::string_view names[] = {"×", "1", "⊕", "&", "→", "∀", "∃"};
  return names[s.index()];
}

StructuralType substitute(const StructuralType& s, const Substitution& theta) {
  return std::visit(
      overloaded{
          [&](const Product& p) -> StructuralType {
            return Product{substitute(p.left, theta), substitute(p.right, theta)};
          },
          [&](const Unit&) -> StructuralType { return Unit{}; },
          [&](const Variant& v) -> StructuralType { return Variant{substitute_fields(v.fields, theta)}; },
          [&](const Record& r) -> StructuralType { return Record{substitute_fields(r.fields, theta)}; },
          [&](const Arrow& a) -> StructuralType {
            return Arrow{substitute(a.domain, theta), substitute(a.codomain, theta)};
          },
          [&](const Forall& q) -> StructuralType { return Forall{q.binder, substitute(q.body, theta)}; },
          [&](const Exists& q) -> StructuralType { return Exists{q.binder, substitute(q.body, theta)}; },
      },
      s);
}

bool operator==(const StructuralType& a, const StructuralType& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const Product& p) {
            const auto& q = std::get<Product>(b);
            return p.left == q.left && p.right == q.right;
          },
          [&](const Unit&) { return true; },
          [&](const Variant& v) { return fields_equal(v.fields, std::get<Variant>(b).fields); },
          [&](const Record& r) { return fields_equal(r.fields, std::get<Record>(b).fields); },
          [&](const Arrow& x) {
            const auto& y = std::get<Arrow>(b);
            return x.domain == y.domain && x.codomain == y.codomain;
          },
          [&](const Forall& q) { return q.body == std::get<Forall>(b).body; },
          [&](const Exists& q) { return q.body == std::get<Exists>(b).body; },
      },
      a);
}

std::size_t hash_value(const StructuralType& s) {
  std::size_t h = hash_combine(0x5bd1e995, s.index());
  return std::visit(overloaded{
                        [&](const Product& p) { return hash_combine(hash_combine(h, p.left.hash()), p.right.hash()); },
                        [&](const Unit&) { return h; },
                        [&](const Variant& v) { return fields_hash(h, v.fields); },
                        [&](const Record& r) { return fields_hash(h, r.fields); },
                        [&](const Arrow& a) {
                          return hash_combine(hash_combine(h, a.domain.hash()), a.codomain.hash());
                        },
                        [&](const Forall& q) { return hash_combine(h, q.body.hash()); },
                        [&](const Exists& q) { return hash_combine(h, q.body.hash()); },
                    },
                    s);
}

std::vector<NamedType> children(const StructuralType& s) {
  return std::visit(overloaded{
                        [](const Product& p) { return std::vector<NamedType>{p.left, p.right}; },
                        [](const Unit&) { return std::vector<NamedType>{}; },
                        [](const Variant& v) {
                          std::vector<NamedType> out;
                          for (const auto& f : v.fields) out.push_back(f.type);
                          return out;
                        },
                        [](const Record& r) {
                          std::vector<NamedType> out;
                          for (const auto& f : r.fields) out.push_back(f.type);
                          return out;
                        },
                        [](const Arrow& a) { return std::vector<NamedType>{a.domain, a.codomain}; },
                        [](const Forall& q) { return std::vector<NamedType>{q.body}; },
                        [](const Exists& q) { return std::vector<NamedType>{q.body}; },
                    },
                    s);
}

ConstructorId Signature::add(Definition def) {
  if (by_name_.count(def.name)) throw Error(ErrorKind::DuplicateDefinition, "'" + def.name + "' is defined twice");
  auto id = static_cast<ConstructorId>(defs_.size());
  by_name_.emplace(def.name, id);
  defs_.push_back(std::move(def));
  return id;
}

void Signature::set_body(ConstructorId id, StructuralType body) {
  if (id >= defs_.size()) throw Error(ErrorKind::UnknownConstructor, "constructor #" + std::to_string(id));
  defs_[id].body = std::move(body);
}

const Definition& Signature::at(ConstructorId id) const {
  if (id >= defs_.size()) throw Error(ErrorKind::UnknownConstructor, "constructor #" + std::to_string(id));
  return defs_[id];
}

std::optional<ConstructorId> Signature::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

ConstructorId Signature::require(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw Error(ErrorKind::UnknownConstructor, "'" + std::string(name) + "' is not defined");
}

std::size_t Signature::internal_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(defs_.begin(), defs_.end(), [](const Definition& d) { return d.origin == Origin::Internal; }));
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) noexcept {
  if (auto c = a.variance <=> b.variance; c != 0) return c;
  if (auto c = a.left <=> b.left; c != 0) return c;
  return a.right <=> b.right;
}

std::size_t PairKeyHash::operator()(const PairKey& k) const noexcept {
  return hash_combine(hash_combine(k.left, k.right), static_cast<std::size_t>(k.variance));
}

std::string to_string(const PathStep& step) {
  switch (step.kind) {
    case PathStep::Kind::Unfold: return "unfold";
    case PathStep::Kind::Left: return "left";
    case PathStep::Kind::Right: return "right";
    case PathStep::Kind::Field: return "." + step.label;
    case PathStep::Kind::Domain: return "dom";
    case PathStep::Kind::Codomain: return "cod";
    case PathStep::Kind::Open: return "open";
    case PathStep::Kind::Pop: return "pop";
  }
  return "?";
}

std::string to_string(const std::vector<PathStep>& path) {
  std::string out;
  for (const auto& s : path) {
    if (!out.empty()) out += ' ';
    out += to_string(s);
  }
  return out.empty() ? "(root)" : out;
}

std::string_view rule_name(TraceRule rule) noexcept {
  switch (rule) {
    case TraceRule::Mismatch: return "MISMATCH";
    case TraceRule::VariantLabels: return "⊕⊕";
    case TraceRule::RecordLabels: return "&&";
    case TraceRule::ParamLeft: return "PARAM-L";
    case TraceRule::ParamRight: return "PARAM-R";
    case TraceRule::VarLeft: return "VAR-L";
    case TraceRule::VarRight: return "VAR-R";
    case TraceRule::Shape: return "SHAPE";
  }
  return "?";
}

std::string_view rule_id(TraceRule rule) noexcept {
  switch (rule) {
    case TraceRule::Mismatch: return "mismatch";
    case TraceRule::VariantLabels: return "variant-labels";
    case TraceRule::RecordLabels: return "record-labels";
    case TraceRule::ParamLeft: return "param-left";
    case TraceRule::ParamRight: return "param-right";
    case TraceRule::VarLeft: return "var-left";
    case TraceRule::VarRight: return "var-right";
    case TraceRule::Shape: return "shape";
  }
  return "unknown";
}

bool is_parametricity_rule(TraceRule rule) noexcept {
  return rule == TraceRule::ParamLeft || rule == TraceRule::ParamRight || rule == TraceRule::VarLeft ||
         rule == TraceRule::VarRight;
}

ConstraintSet ConstraintSet::bottom(RefutationTrace trace) {
  ConstraintSet c;
  c.state_ = std::move(trace);
  return c;
}

const std::vector<Atom>& ConstraintSet::atoms() const noexcept {
  static const std::vector<Atom> none;
  if (auto* a = std::get_if<std::vector<Atom>>(&state_)) return *a;
  return none;
}

const RefutationTrace& ConstraintSet::trace() const {
  if (auto* t = std::get_if<RefutationTrace>(&state_)) return *t;
  throw Error(ErrorKind::Internal, "trace() on a satisfiable constraint set");
}

bool ConstraintSet::insert(const Atom& a) {
  auto* atoms = std::get_if<std::vector<Atom>>(&state_);
  if (!atoms) return false;
  auto it = std::lower_bound(atoms->begin(), atoms->end(), a);
  if (it != atoms->end() && *it == a) return false;
  atoms->insert(it, a);
  return true;
}

bool operator==(const ConstraintSet& a, const ConstraintSet& b) {
  if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
  return a.atoms() == b.atoms();
}

std::pair<ConstraintSet, bool> add_atom(ConstraintSet c, const Atom& a) {
  bool changed = c.insert(a);
  return {std::move(c), changed};
}

struct SubstitutionStack::Frame {
  Substitution theta;
  std::shared_ptr<const Frame> next;
  std::size_t hash;
  std::size_t depth;
};

SubstitutionStack SubstitutionStack::push(Substitution theta) const {
  std::size_t h = top_ ? top_->hash : 0x2545f491;
  for (const auto& t : theta) h = hash_combine(h, t.hash());
  h = hash_combine(h, theta.size());
  std::size_t d = top_ ? top_->depth + 1 : 1;
  return SubstitutionStack(std::make_shared<const Frame>(Frame{std::move(theta), top_, h, d}));
}

const Substitution& SubstitutionStack::top() const {
  if (!top_) throw Error(ErrorKind::Internal, "top() on an empty substitution stack");
  return top_->theta;
}

SubstitutionStack SubstitutionStack::pop() const {
  if (!top_) throw Error(ErrorKind::Internal, "pop() on an empty substitution stack");
  return SubstitutionStack(top_->next);
}

std::size_t SubstitutionStack::depth() const noexcept { return top_ ? top_->depth : 0; }
std::size_t SubstitutionStack::hash() const noexcept { return top_ ? top_->hash : 0; }

bool operator==(const SubstitutionStack& a, const SubstitutionStack& b) noexcept {
  const auto* x = a.top_.get();
  const auto* y = b.top_.get();
  while (x != y) {
    if (!x || !y || x->hash != y->hash || x->depth != y->depth || x->theta != y->theta) return false;
    x = x->next.get();
    y = y->next.get();
  }
  return true;
}

}  // namespace paramsub
