#include "paramsub/saturate.hpp"

#include <unordered_set>

#include "paramsub/error.hpp"
#include "paramsub/format.hpp"
#include "paramsub/overloaded.hpp"

namespace paramsub {

namespace {

constexpr std::size_t kMaxPath = 1u << 20;

std::string braces(const LabelSet& labels) {
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += labels[i];
  }
  return out + "}";
}

void collect_subterms(const NamedType& t, std::unordered_set<NamedType, NamedTypeHash>& out) {
  if (!out.insert(t).second) return;
  if (t.is_inst()) {
    for (const auto& a : t.args()) collect_subterms(a, out);
  }
}

const std::string& binder_of(const StructuralType& s) {
  static const std::string fallback = "z";
  if (const auto* q = std::get_if<Forall>(&s)) return q->binder;
  if (const auto* q = std::get_if<Exists>(&s)) return q->binder;
  return fallback;
}

}  // namespace

FactDatabase::FactDatabase(const Signature& sig, SaturationOptions options)
    : sig_(&sig), options_(options), rng_(options.seed.value_or(0)) {}

std::size_t FactDatabase::subformula_count(ConstructorId id) const {
  if (auto it = sub_counts_.find(id); it != sub_counts_.end()) return it->second;
  std::unordered_set<NamedType, NamedTypeHash> subterms;
  for (const auto& c : children(sig_->at(id).body)) collect_subterms(c, subterms);
  std::size_t n = subterms.size() + 1;
  sub_counts_.emplace(id, n);
  return n;
}

std::size_t FactDatabase::fuel() const noexcept { return options_.max_facts.value_or(4 * bound_total_); }

std::optional<EntryId> FactDatabase::find(const PairKey& key) const {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

EntryId FactDatabase::demand(const PairKey& key) {
  if (auto it = by_key_.find(key); it != by_key_.end()) return it->second;
  sig_->at(key.left);
  sig_->at(key.right);
  auto id = static_cast<EntryId>(entries_.size());
  Entry e;
  e.key = key;
  e.bound = 2 * subformula_count(key.left) * subformula_count(key.right);
  e.judgments.push_back(JudgmentRecord{std::nullopt, Provenance{}});
  bound_total_ += e.bound;
  entries_.push_back(std::move(e));
  by_key_.emplace(key, id);
  worklist_.push_back(Task{id, 0});
  return id;
}

bool FactDatabase::step() {
  if (worklist_.empty()) return false;
  Task task;
  if (options_.seed) {
    std::uniform_int_distribution<std::size_t> pick(0, worklist_.size() - 1);
    std::size_t i = pick(rng_);
    task = worklist_[i];
    worklist_[i] = worklist_.back();
    worklist_.pop_back();
  } else {
    task = worklist_.front();
    worklist_.pop_front();
  }
  auto& entry = entries_[task.entry];
  if (++entry.processed > entry.bound) {
    throw Error(ErrorKind::Internal, "pair " + format_key(entry.key) + " processed " + std::to_string(entry.processed) +
                                         " judgments, above its bound " + std::to_string(entry.bound));
  }
  if (++processed_total_ > fuel()) {
    throw Error(ErrorKind::FuelExhausted, "processed " + std::to_string(processed_total_) + " judgments over " +
                                              std::to_string(entries_.size()) + " pairs; fuel is " +
                                              std::to_string(fuel()));
  }
  process(task.entry, task.judgment);
  return true;
}

void FactDatabase::run() {
  while (step()) {
  }
}

void FactDatabase::enqueue(EntryId e, const Judgment& j, const Provenance& p) {
  auto& entry = entries_[e];
  if (entry.index.count(j)) return;
  auto id = static_cast<std::uint32_t>(entry.judgments.size());
  entry.judgments.push_back(JudgmentRecord{j, p});
  entry.index.emplace(j, id);
  worklist_.push_back(Task{e, id});
}

void FactDatabase::process(EntryId e, std::uint32_t j) {
  const auto& record = entries_[e].judgments[j];
  if (!record.judgment) {
    process_seed(e);
  } else {
    Judgment copy = *record.judgment;
    process_named(e, j, copy);
  }
}

void FactDatabase::process_seed(EntryId e) {
  const PairKey key = entries_[e].key;
  const StructuralType& a = sig_->at(key.left).body;
  const StructuralType& b = sig_->at(key.right).body;
  const Variance xi = key.variance;
  auto emit = [&](const NamedType& l, const NamedType& r, Variance v, PathStep step) {
    enqueue(e, Judgment{l, r, v}, Provenance{Provenance::Kind::Decompose, 0, std::move(step), 0, 0});
  };
  if (a.index() != b.index()) {
    set_bottom(e, BottomCause{TraceRule::Mismatch, 0, 0,
                              std::string(head_symbol(a)) + " against " + std::string(head_symbol(b))});
    return;
  }
  auto common = [&](const std::vector<Field>& l, const std::vector<Field>& r) {
    for (const auto& f : l) {
      if (const auto* other = find_field(r, f.label)) emit(f.type, *other, xi, PathStep{PathStep::Kind::Field, f.label});
    }
  };
  auto label_failure = [&](TraceRule rule, const LabelSet& small, const LabelSet& large) {
    set_bottom(e, BottomCause{rule, 0, 0, "label set " + braces(small) + " is not within " + braces(large)});
  };
  std::visit(overloaded{
                 [&](const Product& p) {
                   const auto& q = std::get<Product>(b);
                   emit(p.left, q.left, xi, PathStep{PathStep::Kind::Left, {}});
                   emit(p.right, q.right, xi, PathStep{PathStep::Kind::Right, {}});
                 },
                 [&](const Unit&) {},
                 [&](const Variant& v) {
                   const auto& w = std::get<Variant>(b);
                   LabelSet l = labels_of(v.fields), k = labels_of(w.fields);
                   if (!label_subset(l, k, xi)) {
                     xi == Variance::Plus ? label_failure(TraceRule::VariantLabels, l, k)
                                          : label_failure(TraceRule::VariantLabels, k, l);
                     return;
                   }
                   common(v.fields, w.fields);
                 },
                 [&](const Record& r) {
                   const auto& s = std::get<Record>(b);
                   LabelSet l = labels_of(r.fields), k = labels_of(s.fields);
                   if (!label_subset(k, l, xi)) {
                     xi == Variance::Plus ? label_failure(TraceRule::RecordLabels, k, l)
                                          : label_failure(TraceRule::RecordLabels, l, k);
                     return;
                   }
                   common(r.fields, s.fields);
                 },
                 [&](const Arrow& f) {
                   const auto& g = std::get<Arrow>(b);
                   emit(f.domain, g.domain, negate(xi), PathStep{PathStep::Kind::Domain, {}});
                   emit(f.codomain, g.codomain, xi, PathStep{PathStep::Kind::Codomain, {}});
                 },
                 [&](const Forall& q) {
                   const auto z = NamedType::free(0);
                   emit(open(q.body, z), open(std::get<Forall>(b).body, z), xi, PathStep{PathStep::Kind::Open, {}});
                 },
                 [&](const Exists& q) {
                   const auto z = NamedType::free(0);
                   emit(open(q.body, z), open(std::get<Exists>(b).body, z), xi, PathStep{PathStep::Kind::Open, {}});
                 },
             },
             a);
}

void FactDatabase::process_named(EntryId e, std::uint32_t j, const Judgment& jm) {
  const NamedType& l = jm.left;
  const NamedType& r = jm.right;
  if (l.is_param() && r.is_param()) {
    add_atom(e, Atom{l.index(), jm.variance, r.index()}, j);
  } else if (l.is_param()) {
    set_bottom(e, BottomCause{TraceRule::ParamLeft, j, 0, "parameter against a non-parameter"});
  } else if (r.is_param()) {
    set_bottom(e, BottomCause{TraceRule::ParamRight, j, 0, "non-parameter against a parameter"});
  } else if (l.is_var() && r.is_var() && l == r) {
    // No rule for ⟨x ≤ x⟩: nothing to record.
  } else if (l.is_var()) {
    set_bottom(e, BottomCause{TraceRule::VarLeft, j, 0, "variable against a different type"});
  } else if (r.is_var()) {
    set_bottom(e, BottomCause{TraceRule::VarRight, j, 0, "type against a different variable"});
  } else {
    EntryId child = demand(PairKey{l.head(), r.head(), jm.variance});
    add_consumer(child, Consumer{e, j, l.args(), r.args()});
  }
}

void FactDatabase::add_consumer(EntryId child, Consumer c) {
  entries_[child].consumers.push_back(c);
  for (const auto& [atom, origin] : entries_[child].atoms) {
    enqueue(c.entry, Judgment{c.left[atom.left], c.right[atom.right], atom.variance},
            Provenance{Provenance::Kind::Compose, c.judgment, {}, child, origin});
  }
  if (entries_[child].bottom) set_bottom(c.entry, BottomCause{std::nullopt, c.judgment, child, {}});
}

void FactDatabase::add_atom(EntryId e, const Atom& a, std::uint32_t origin) {
  if (!entries_[e].atoms.emplace(a, origin).second) return;
  for (std::size_t i = 0; i < entries_[e].consumers.size(); ++i) {
    const Consumer c = entries_[e].consumers[i];
    enqueue(c.entry, Judgment{c.left[a.left], c.right[a.right], a.variance},
            Provenance{Provenance::Kind::Compose, c.judgment, {}, e, origin});
  }
}

void FactDatabase::set_bottom(EntryId e, BottomCause cause) {
  std::vector<std::pair<EntryId, BottomCause>> pending{{e, std::move(cause)}};
  while (!pending.empty()) {
    auto [id, why] = std::move(pending.back());
    pending.pop_back();
    if (entries_[id].bottom) continue;
    entries_[id].bottom = std::move(why);
    for (const auto& c : entries_[id].consumers) {
      pending.emplace_back(c.entry, BottomCause{std::nullopt, c.judgment, id, {}});
    }
  }
}

ConstraintSet FactDatabase::constraints(EntryId id) const {
  const auto& e = entries_.at(id);
  if (e.bottom) return ConstraintSet::bottom(trace(id));
  ConstraintSet out;
  for (const auto& [atom, origin] : e.atoms) out.insert(atom);
  return out;
}

Rule FactDatabase::rule_of(const PairKey& key) const {
  auto id = find(key);
  if (!id) throw Error(ErrorKind::UnknownPair, format_key(key) + " was never demanded");
  const auto& e = entries_[*id];
  if (e.bottom) return Rule::invalid(trace(*id));
  std::vector<Atom> atoms;
  for (const auto& [atom, origin] : e.atoms) atoms.push_back(atom);
  return Rule::valid(std::move(atoms));
}

RefutationTrace FactDatabase::trace(EntryId id) const {
  RefutationTrace out;
  EntryId cur = id;
  for (std::size_t guard = 0; guard <= entries_.size(); ++guard) {
    const auto& e = entries_.at(cur);
    if (!e.bottom) throw Error(ErrorKind::Internal, "trace() on a pair that is not ⊥");
    out.steps.push_back(TraceStep{e.key, format_judgment(cur, e.bottom->judgment)});
    if (e.bottom->rule) {
      out.rule = *e.bottom->rule;
      out.detail = e.bottom->detail;
      return out;
    }
    cur = e.bottom->child;
  }
  throw Error(ErrorKind::Internal, "cyclic ⊥ links");
}

void FactDatabase::append_path(EntryId id, std::uint32_t judgment, std::vector<PathStep>& out) const {
  if (out.size() > kMaxPath) throw Error(ErrorKind::Internal, "derivation path too long to reconstruct");
  const auto& rec = entries_.at(id).judgments.at(judgment);
  switch (rec.provenance.kind) {
    case Provenance::Kind::Init:
      return;
    case Provenance::Kind::Decompose:
      append_path(id, rec.provenance.parent, out);
      out.push_back(rec.provenance.step);
      return;
    case Provenance::Kind::Compose:
      append_path(id, rec.provenance.parent, out);
      out.push_back(PathStep{PathStep::Kind::Unfold, {}});
      append_path(rec.provenance.child, rec.provenance.child_judgment, out);
      return;
  }
}

std::vector<PathStep> FactDatabase::path_to(EntryId id, std::uint32_t judgment) const {
  std::vector<PathStep> out;
  append_path(id, judgment, out);
  return out;
}

std::vector<PathStep> FactDatabase::failure_path(EntryId id) const {
  std::vector<PathStep> out;
  EntryId cur = id;
  for (std::size_t guard = 0; guard <= entries_.size(); ++guard) {
    const auto& e = entries_.at(cur);
    if (!e.bottom) throw Error(ErrorKind::Internal, "failure_path() on a pair that is not ⊥");
    append_path(cur, e.bottom->judgment, out);
    if (e.bottom->rule) return out;
    out.push_back(PathStep{PathStep::Kind::Unfold, {}});
    cur = e.bottom->child;
  }
  throw Error(ErrorKind::Internal, "cyclic ⊥ links");
}

std::string FactDatabase::format_judgment(EntryId id, std::uint32_t judgment) const {
  const auto& e = entries_.at(id);
  const auto& t = sig_->at(e.key.left);
  const auto& u = sig_->at(e.key.right);
  Names left{t.params, binder_of(t.body)};
  Names right{right_names(t.params, u.params), binder_of(t.body)};
  const auto& rec = e.judgments.at(judgment);
  std::string op = (rec.judgment ? rec.judgment->variance : e.key.variance) == Variance::Plus ? " <= " : " >= ";
  if (!rec.judgment) {
    Names inner_right = right;
    inner_right.var = binder_of(u.body);
    return format(*sig_, t.body, left) + op + format(*sig_, u.body, inner_right);
  }
  return format(*sig_, rec.judgment->left, left) + op + format(*sig_, rec.judgment->right, right);
}

std::string FactDatabase::format_key(const PairKey& key) const { return format_pair(*sig_, key); }

FactDatabase saturate(const Signature& sig, std::span<const PairKey> roots, SaturationOptions options) {
  FactDatabase db(sig, options);
  for (const auto& k : roots) db.demand(k);
  db.run();
  return db;
}

std::vector<PairKey> all_user_pairs(const Signature& sig) {
  std::vector<PairKey> out;
  for (ConstructorId t = 0; t < sig.size(); ++t) {
    if (sig.at(t).origin != Origin::User) continue;
    for (ConstructorId u = 0; u < sig.size(); ++u) {
      if (sig.at(u).origin != Origin::User) continue;
      out.push_back(PairKey{t, u, Variance::Plus});
      out.push_back(PairKey{t, u, Variance::Minus});
    }
  }
  return out;
}

}  // namespace paramsub
