#include "paramsub/query.hpp"

#include "paramsub/error.hpp"
#include "paramsub/overloaded.hpp"

namespace paramsub {

std::string_view to_string(ReasonKind k) noexcept {
  switch (k) {
    case ReasonKind::Parametricity:
      return "parametricity violation";
    case ReasonKind::Structural:
      return "structural violation";
    case ReasonKind::Shape:
      return "shape mismatch";
  }
  return "?";
}

namespace {

std::string op(Variance v) { return v == Variance::Plus ? " <= " : " >= "; }

PathStep unfold() { return PathStep{PathStep::Kind::Unfold, {}}; }

// Paths only matter for replay; a pathological provenance chain leaves it empty.
template <class F>
std::vector<PathStep> try_path(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Internal) throw;
    return {};
  }
}

Verdict check_rec(FactDatabase& db, const NamedType& l, const NamedType& r, Variance v) {
  const Signature& sig = db.signature();
  if (l.is_var() || r.is_var()) {
    if (l == r) return Verdict{Derivation{VarNode{l}}};
    RefutationTrace trace;
    trace.steps.push_back(TraceStep{std::nullopt, format(sig, l) + op(v) + format(sig, r)});
    trace.rule = TraceRule::Shape;
    trace.detail = l.is_var() && r.is_var() ? "distinct variables" : "variable against a constructor";
    return Verdict{Refutation{ReasonKind::Shape, std::move(trace), l, r, v, {}, {}}};
  }
  EntryId id = db.demand(PairKey{l.head(), r.head(), v});
  db.run();
  const Entry& entry = db.entry(id);
  const PairKey key = entry.key;
  if (entry.bottom) {
    RefutationTrace trace = db.trace(id);
    ReasonKind kind = is_parametricity_rule(trace.rule) ? ReasonKind::Parametricity : ReasonKind::Structural;
    std::vector<PathStep> path = try_path([&] { return db.failure_path(id); });
    path.insert(path.begin(), unfold());
    return Verdict{Refutation{kind, std::move(trace), l, r, v, {}, std::move(path)}};
  }
  // Copy: recursion may grow the entry table.
  const std::map<Atom, std::uint32_t> atoms = entry.atoms;
  ComposeNode node{key, l, r, {}};
  for (const auto& [atom, origin] : atoms) {
    Verdict sub = check_rec(db, l.args()[atom.left], r.args()[atom.right], atom.variance);
    if (!sub.yes()) {
      Refutation ref = std::get<Refutation>(std::move(sub.result));
      ref.context.insert(ref.context.begin(), QueryContext{key, atom});
      std::vector<PathStep> prefix = try_path([&] { return db.path_to(id, origin); });
      prefix.insert(prefix.begin(), unfold());
      ref.path.insert(ref.path.begin(), prefix.begin(), prefix.end());
      return Verdict{std::move(ref)};
    }
    node.children.push_back(DerivationChild{atom, std::get<Derivation>(std::move(sub.result))});
  }
  return Verdict{Derivation{std::move(node)}};
}

void render(const Signature& sig, const Names& names, const Derivation& d, Variance v, int depth,
            std::string& out) {
  std::string indent(2 * depth, ' ');
  std::visit(overloaded{
                 [&](const VarNode& n) {
                   out += indent + format(sig, n.var, names) + op(v) + format(sig, n.var, names) + "  by B-VAR\n";
                 },
                 [&](const ComposeNode& n) {
                   const auto& t = sig.at(n.key.left);
                   const auto& u = sig.at(n.key.right);
                   auto rn = right_names(t.params, u.params);
                   std::string rule = format_pair(sig, n.key);
                   for (std::size_t i = 0; i < n.children.size(); ++i) {
                     rule += (i ? ", " : " if ") + format_atom(n.children[i].atom, t.params, rn);
                   }
                   out += indent + format(sig, n.left, names) + op(v) + format(sig, n.right, names) + "  by " +
                          rule + "\n";
                   for (const auto& c : n.children) render(sig, names, c.derivation, c.atom.variance, depth + 1, out);
                 },
             },
             d.node);
}

}  // namespace

Verdict check(FactDatabase& db, const NamedType& left, const NamedType& right, Variance variance) {
  for (const auto* t : {&left, &right}) {
    if (has_params(*t) || has_bound_vars(*t)) {
      throw Error(ErrorKind::OpenTypeInQuery, "query side " + format(db.signature(), *t) + " is not closed");
    }
  }
  return check_rec(db, left, right, variance);
}

Verdict Checker::check(const NamedType& left, const NamedType& right, Variance variance) {
  std::lock_guard lock(mutex_);
  return paramsub::check(db_, left, right, variance);
}

std::size_t node_count(const Derivation& d) {
  if (const auto* c = std::get_if<ComposeNode>(&d.node)) {
    std::size_t n = 1;
    for (const auto& child : c->children) n += node_count(child.derivation);
    return n;
  }
  return 1;
}

std::string explain(const Signature& sig, const Verdict& v, const Names& names) {
  std::string out;
  if (v.yes()) {
    const Derivation& d = v.derivation();
    Variance root = Variance::Plus;
    if (const auto* c = std::get_if<ComposeNode>(&d.node)) root = c->key.variance;
    render(sig, names, d, root, 0, out);
    return out;
  }
  const Refutation& r = v.refutation();
  out += "no: " + std::string(to_string(r.kind)) + "\n";
  for (const auto& c : r.context) {
    const auto& t = sig.at(c.key.left);
    const auto& u = sig.at(c.key.right);
    out += "  required by " + format_pair(sig, c.key) + " via " +
           format_atom(c.atom, t.params, right_names(t.params, u.params)) + "\n";
  }
  out += "  failing: " + format(sig, r.left, names) + op(r.variance) + format(sig, r.right, names) + "\n";
  for (const auto& s : r.trace.steps) {
    out += "    ";
    if (s.key) out += format_pair(sig, *s.key) + ": ";
    out += s.judgment + "\n";
  }
  out += "  " + std::string(rule_name(r.trace.rule)) + ": " + r.trace.detail + "\n";
  return out;
}

}  // namespace paramsub
