#include "paramsub/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "paramsub/error.hpp"
#include "paramsub/overloaded.hpp"

namespace paramsub {

namespace {

std::string braces(const LabelSet& labels) {
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += labels[i];
  }
  return out + "}";
}

struct Child {
  NamedType left;
  NamedType right;
  Variance variance;
  PathStep step;
  bool opens = false;
};

struct LocalFailure {
  TraceRule rule;
  std::string detail;
};

using Local = std::variant<std::vector<Child>, LocalFailure>;

// One structural rule applied bottom-up. Binders are opened to free(fresh).
Local decompose(const StructuralType& a, const StructuralType& b, Variance xi, std::uint32_t fresh) {
  if (a.index() != b.index()) {
    return LocalFailure{TraceRule::Mismatch, std::string(head_symbol(a)) + " against " + std::string(head_symbol(b))};
  }
  std::vector<Child> out;
  auto common = [&](const std::vector<Field>& l, const std::vector<Field>& r) {
    for (const auto& f : l) {
      if (const auto* other = find_field(r, f.label)) {
        out.push_back(Child{f.type, *other, xi, PathStep{PathStep::Kind::Field, f.label}});
      }
    }
  };
  auto labels = [&](TraceRule rule, const LabelSet& small, const LabelSet& large) -> std::optional<LocalFailure> {
    if (label_subset(small, large, Variance::Plus)) return std::nullopt;
    return LocalFailure{rule, "label set " + braces(small) + " is not within " + braces(large)};
  };
  auto quantified = [&](const NamedType& l, const NamedType& r) {
    auto z = NamedType::free(fresh);
    out.push_back(Child{open(l, z), open(r, z), xi, PathStep{PathStep::Kind::Open, {}}, true});
  };
  std::optional<LocalFailure> failure;
  std::visit(overloaded{
                 [&](const Product& p) {
                   const auto& q = std::get<Product>(b);
                   out.push_back(Child{p.left, q.left, xi, PathStep{PathStep::Kind::Left, {}}});
                   out.push_back(Child{p.right, q.right, xi, PathStep{PathStep::Kind::Right, {}}});
                 },
                 [&](const Unit&) {},
                 [&](const Variant& v) {
                   const auto& w = std::get<Variant>(b);
                   LabelSet l = labels_of(v.fields), k = labels_of(w.fields);
                   failure = xi == Variance::Plus ? labels(TraceRule::VariantLabels, l, k)
                                                  : labels(TraceRule::VariantLabels, k, l);
                   if (!failure) common(v.fields, w.fields);
                 },
                 [&](const Record& r) {
                   const auto& s = std::get<Record>(b);
                   LabelSet l = labels_of(r.fields), k = labels_of(s.fields);
                   failure = xi == Variance::Plus ? labels(TraceRule::RecordLabels, k, l)
                                                  : labels(TraceRule::RecordLabels, l, k);
                   if (!failure) common(r.fields, s.fields);
                 },
                 [&](const Arrow& f) {
                   const auto& g = std::get<Arrow>(b);
                   out.push_back(Child{f.domain, g.domain, negate(xi), PathStep{PathStep::Kind::Domain, {}}});
                   out.push_back(Child{f.codomain, g.codomain, xi, PathStep{PathStep::Kind::Codomain, {}}});
                 },
                 [&](const Forall& q) { quantified(q.body, std::get<Forall>(b).body); },
                 [&](const Exists& q) { quantified(q.body, std::get<Exists>(b).body); },
             },
             a);
  if (failure) return *failure;
  return out;
}

// A named goal with no applicable rule, or nothing when a rule applies.
std::optional<LocalFailure> named_failure(const NamedType& l, const NamedType& r) {
  if (l.is_param() && !r.is_param()) return LocalFailure{TraceRule::ParamLeft, "parameter against a non-parameter"};
  if (r.is_param() && !l.is_param()) return LocalFailure{TraceRule::ParamRight, "non-parameter against a parameter"};
  if (l.is_var() && l != r) return LocalFailure{TraceRule::VarLeft, "variable against a different type"};
  if (r.is_var() && l != r) return LocalFailure{TraceRule::VarRight, "type against a different variable"};
  return std::nullopt;
}

// Shared search. In structural mode the stacks stay empty and instances are
// substituted on unfolding; in parametric mode they are pushed instead.
class Search {
 public:
  Search(const Signature& sig, bool parametric) : sig_(sig), parametric_(parametric) {}

  std::optional<Violation> named(const NamedType& l, const SubstitutionStack& ls, const NamedType& r,
                                 const SubstitutionStack& rs, Variance v, std::uint32_t fresh, std::size_t budget) {
    if (l.is_param() && r.is_param()) {
      if (!parametric_ || ls.empty() || rs.empty()) {
        return Violation{{}, TraceRule::ParamLeft, "parameter outside any substitution", 0};
      }
      const auto& theta = ls.top();
      const auto& phi = rs.top();
      if (l.index() >= theta.size() || r.index() >= phi.size()) {
        return Violation{{}, TraceRule::ParamLeft, "parameter outside its substitution", 0};
      }
      auto found = named(theta[l.index()], ls.pop(), phi[r.index()], rs.pop(), v, fresh, budget);
      if (found) found->path.insert(found->path.begin(), PathStep{PathStep::Kind::Pop, {}});
      return found;
    }
    if (auto f = named_failure(l, r)) return Violation{{}, f->rule, f->detail, 0};
    if (l.is_var()) return std::nullopt;  // the same variable on both sides
    if (budget == 0) return std::nullopt;

    Key key{l, ls, r, rs, v, fresh};
    auto& memo = memo_[key];
    if (memo.best && memo.best->depth <= budget) return memo.best;
    if (budget < memo.cleared_below) return std::nullopt;

    const auto& a = sig_.at(l.head()).body;
    const auto& b = sig_.at(r.head()).body;
    std::optional<Violation> found;
    if (parametric_) {
      found = structural(a, ls.push(l.args()), b, rs.push(r.args()), v, fresh, budget - 1);
    } else {
      found = structural(substitute(a, l.args()), ls, substitute(b, r.args()), rs, v, fresh, budget - 1);
    }
    if (found) {
      found->path.insert(found->path.begin(), PathStep{PathStep::Kind::Unfold, {}});
      ++found->depth;
    }
    // `memo` may dangle after the recursive calls rehashed the table.
    auto& slot = memo_[key];
    if (found) {
      slot.best = found;
      slot.cleared_below = std::max(slot.cleared_below, found->depth);
    } else {
      slot.cleared_below = std::max(slot.cleared_below, budget + 1);
    }
    return found;
  }

 private:
  struct Key {
    NamedType left;
    SubstitutionStack left_stack;
    NamedType right;
    SubstitutionStack right_stack;
    Variance variance;
    std::uint32_t fresh;

    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = hash_combine(k.left.hash(), k.right.hash());
      h = hash_combine(h, k.left_stack.hash());
      h = hash_combine(h, k.right_stack.hash());
      return hash_combine(h, (static_cast<std::size_t>(k.fresh) << 1) | static_cast<std::size_t>(k.variance));
    }
  };
  struct Memo {
    std::size_t cleared_below = 0;  // no violation within any smaller budget
    std::optional<Violation> best;
  };

  std::optional<Violation> structural(const StructuralType& a, const SubstitutionStack& ls, const StructuralType& b,
                                      const SubstitutionStack& rs, Variance v, std::uint32_t fresh,
                                      std::size_t budget) {
    auto local = decompose(a, b, v, fresh);
    if (auto* f = std::get_if<LocalFailure>(&local)) return Violation{{}, f->rule, f->detail, 0};
    std::optional<Violation> best;
    for (const auto& c : std::get<std::vector<Child>>(local)) {
      if (best && best->depth == 0) break;
      std::size_t b2 = best ? std::min(budget, best->depth - 1) : budget;
      auto found = named(c.left, ls, c.right, rs, c.variance, c.opens ? fresh + 1 : fresh, b2);
      if (found && (!best || found->depth < best->depth)) {
        found->path.insert(found->path.begin(), c.step);
        best = std::move(found);
      }
    }
    return best;
  }

  const Signature& sig_;
  bool parametric_;
  std::unordered_map<Key, Memo, KeyHash> memo_;
};

// Fresh ids for opened binders start above every id already in the goal.
std::uint32_t first_fresh(const NamedType& t) {
  if (t.kind() == NamedType::Kind::FreeVar) return t.index() + 1;
  std::uint32_t out = 0;
  if (t.is_inst()) {
    for (const auto& a : t.args()) out = std::max(out, first_fresh(a));
  }
  return out;
}

std::uint32_t first_fresh(const SubstitutionStack& s) {
  std::uint32_t out = 0;
  for (auto cur = s; !cur.empty(); cur = cur.pop()) {
    for (const auto& t : cur.top()) out = std::max(out, first_fresh(t));
  }
  return out;
}

RefuteOutcome outcome(std::optional<Violation> v, std::size_t depth) {
  if (v) return RefuteOutcome{std::move(*v)};
  return RefuteOutcome{NoCounterexample{depth}};
}

}  // namespace

RefuteOutcome bounded_structural_refute(const Signature& sig, const NamedType& left, const NamedType& right,
                                        Variance variance, std::size_t depth) {
  Search search(sig, false);
  std::uint32_t fresh = std::max(first_fresh(left), first_fresh(right));
  return outcome(search.named(left, {}, right, {}, variance, fresh, depth), depth);
}

RefuteOutcome bounded_parametric_refute(const Signature& sig, const NamedType& left, const SubstitutionStack& left_stack,
                                        const NamedType& right, const SubstitutionStack& right_stack,
                                        Variance variance, std::size_t depth) {
  Search search(sig, true);
  std::uint32_t fresh = std::max({first_fresh(left), first_fresh(right), first_fresh(left_stack),
                                  first_fresh(right_stack)});
  return outcome(search.named(left, left_stack, right, right_stack, variance, fresh, depth), depth);
}

bool mono_decide(const Signature& sig, ConstructorId left, ConstructorId right) {
  for (ConstructorId id = 0; id < sig.size(); ++id) {
    const auto& d = sig.at(id);
    bool quantified = std::holds_alternative<Forall>(d.body) || std::holds_alternative<Exists>(d.body);
    if (!d.params.empty() || quantified) {
      throw Error(ErrorKind::NotMonomorphic, "constructor '" + d.name + "' is parameterized or quantified");
    }
  }
  sig.at(left);
  sig.at(right);
  // Pairs read as left <= right. Reaching a pair again is fine: the relation
  // is the greatest fixed point, so only a local failure refutes.
  std::set<std::pair<ConstructorId, ConstructorId>> seen{{left, right}};
  std::deque<std::pair<ConstructorId, ConstructorId>> pending{{left, right}};
  while (!pending.empty()) {
    auto [t, u] = pending.front();
    pending.pop_front();
    auto local = decompose(sig.at(t).body, sig.at(u).body, Variance::Plus, 0);
    if (std::holds_alternative<LocalFailure>(local)) return false;
    for (const auto& c : std::get<std::vector<Child>>(local)) {
      auto next = c.variance == Variance::Plus ? std::pair{c.left.head(), c.right.head()}
                                               : std::pair{c.right.head(), c.left.head()};
      if (seen.insert(next).second) pending.push_back(next);
    }
  }
  return true;
}

std::optional<TraceRule> replay_structural(const Signature& sig, const NamedType& left, const NamedType& right,
                                           Variance variance, const std::vector<PathStep>& path) {
  struct NamedGoal {
    NamedType left, right;
  };
  struct StructGoal {
    StructuralType left, right;
  };
  std::variant<NamedGoal, StructGoal> goal = NamedGoal{left, right};
  Variance v = variance;
  std::uint32_t fresh = std::max(first_fresh(left), first_fresh(right));
  for (const auto& step : path) {
    if (auto* n = std::get_if<NamedGoal>(&goal)) {
      if (step.kind != PathStep::Kind::Unfold || !n->left.is_inst() || !n->right.is_inst()) return std::nullopt;
      goal = StructGoal{substitute(sig.at(n->left.head()).body, n->left.args()),
                        substitute(sig.at(n->right.head()).body, n->right.args())};
      continue;
    }
    auto& s = std::get<StructGoal>(goal);
    auto local = decompose(s.left, s.right, v, fresh);
    if (std::holds_alternative<LocalFailure>(local)) return std::nullopt;
    const auto& kids = std::get<std::vector<Child>>(local);
    auto it = std::find_if(kids.begin(), kids.end(), [&](const Child& c) { return c.step == step; });
    if (it == kids.end()) return std::nullopt;
    if (it->opens) ++fresh;
    v = it->variance;
    goal = NamedGoal{it->left, it->right};
  }
  if (auto* n = std::get_if<NamedGoal>(&goal)) {
    if (auto f = named_failure(n->left, n->right)) return f->rule;
    return std::nullopt;
  }
  auto& s = std::get<StructGoal>(goal);
  auto local = decompose(s.left, s.right, v, fresh);
  if (auto* f = std::get_if<LocalFailure>(&local)) return f->rule;
  return std::nullopt;
}

}  // namespace paramsub
