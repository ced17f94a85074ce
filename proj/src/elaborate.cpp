#include "paramsub/elaborate.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "paramsub/overloaded.hpp"

namespace paramsub {

namespace {

using AbbrevTable = std::unordered_map<std::string, const SurfaceDefinition*>;

AbbrevTable abbreviations(const SourceFile& file) {
  AbbrevTable out;
  for (const auto& d : file.items) {
    if (d.kind == DefinitionKind::Abbreviation) out.emplace(d.name, &d);
  }
  return out;
}

void check_acyclic(const SourceFile& file, const AbbrevTable& table) {
  enum class Mark { Active, Done };
  std::unordered_map<std::string, Mark> marks;
  std::vector<std::string> stack;
  auto visit = [&](auto& self, const SurfaceDefinition& d) -> void {
    marks[d.name] = Mark::Active;
    stack.push_back(d.name);
    for (const auto& ref : referenced_constructors(d.body)) {
      auto it = table.find(ref);
      if (it == table.end()) continue;
      auto m = marks.find(ref);
      if (m != marks.end() && m->second == Mark::Active) {
        auto from = std::find(stack.begin(), stack.end(), ref);
        std::string cycle;
        for (auto s = from; s != stack.end(); ++s) cycle += *s + " -> ";
        cycle += ref;
        throw Error(ErrorKind::RecursiveAbbreviation, "abbreviation cycle " + cycle, table.at(ref)->span);
      }
      if (m == marks.end()) self(self, *it->second);
    }
    stack.pop_back();
    marks[d.name] = Mark::Done;
  };
  for (const auto& d : file.items) {
    if (d.kind == DefinitionKind::Abbreviation && !marks.count(d.name)) visit(visit, d);
  }
}

class Expander {
 public:
  explicit Expander(const AbbrevTable& table) : table_(table) {}

  SurfaceType expand(const SurfaceType& t) {
    using surface::Ctor, surface::Param, surface::Bound, surface::Product, surface::Unit, surface::Variant,
      surface::Record, surface::Arrow, surface::Forall, surface::Exists;
    auto fields = [&](const std::vector<SurfaceField>& fs) {
      std::vector<SurfaceField> out;
      for (const auto& f : fs) out.push_back(SurfaceField{f.label, expand(f.type)});
      return out;
    };
    return std::visit(
        overloaded{
            [&](const Ctor& c) -> SurfaceType {
              std::vector<SurfaceType> args;
              for (const auto& a : c.args) args.push_back(expand(a));
              auto it = table_.find(c.name);
              if (it == table_.end()) return SurfaceType(Ctor{c.name, std::move(args)}, t.span());
              return instantiate(body(*it->second), args);
            },
            [&](const Product& p) -> SurfaceType { return SurfaceType(Product{expand(p.left), expand(p.right)}, t.span()); },
            [&](const Variant& v) -> SurfaceType { return SurfaceType(Variant{fields(v.fields)}, t.span()); },
            [&](const Record& r) -> SurfaceType { return SurfaceType(Record{fields(r.fields)}, t.span()); },
            [&](const Arrow& a) -> SurfaceType {
              return SurfaceType(Arrow{expand(a.domain), expand(a.codomain)}, t.span());
            },
            [&](const Forall& q) -> SurfaceType { return SurfaceType(Forall{q.binder, expand(q.body)}, t.span()); },
            [&](const Exists& q) -> SurfaceType { return SurfaceType(Exists{q.binder, expand(q.body)}, t.span()); },
            [&](const auto&) -> SurfaceType { return t; },
        },
        t.node());
  }

 private:
  const SurfaceType& body(const SurfaceDefinition& d) {
    auto it = done_.find(d.name);
    if (it == done_.end()) it = done_.emplace(d.name, expand(d.body)).first;
    return it->second;
  }

  const AbbrevTable& table_;
  std::unordered_map<std::string, SurfaceType> done_;
};

}  // namespace

SourceFile expand_abbreviations(const SourceFile& file) {
  auto table = abbreviations(file);
  if (table.empty()) return file;
  check_acyclic(file, table);
  Expander ex(table);
  SourceFile out;
  for (const auto& d : file.items) {
    if (d.kind == DefinitionKind::Abbreviation) continue;
    out.items.push_back(SurfaceDefinition{d.kind, d.name, d.params, ex.expand(d.body), d.origin, d.span});
  }
  return out;
}

SurfaceType expand_abbreviations(const SourceFile& scope, const SurfaceType& t) {
  auto table = abbreviations(scope);
  if (table.empty()) return t;
  check_acyclic(scope, table);
  return Expander(table).expand(t);
}

struct Elaborator::Scope {
  std::vector<std::uint32_t> params;   // working ids of the definition's parameters
  std::vector<std::uint32_t> binders;  // working ids standing for bound variables, innermost last
};

Elaborator::Elaborator(NormalizeOptions options) : options_(options) {}

namespace {

// Working ids in first-occurrence order.
void free_params(const NamedType& t, std::vector<std::uint32_t>& out) {
  if (t.is_param()) {
    if (std::find(out.begin(), out.end(), t.index()) == out.end()) out.push_back(t.index());
  } else if (t.is_inst()) {
    for (const auto& a : t.args()) free_params(a, out);
  }
}

// Maps working ids to positions; unmapped ids are left alone.
Substitution renaming(const std::vector<std::uint32_t>& ids, std::uint32_t limit) {
  Substitution theta;
  theta.reserve(limit);
  for (std::uint32_t i = 0; i < limit; ++i) theta.push_back(NamedType::param(i));
  for (std::uint32_t k = 0; k < ids.size(); ++k) theta[ids[k]] = NamedType::param(k);
  return theta;
}

// Replaces working parameter `id` with the innermost bound variable.
NamedType bind(const NamedType& t, std::uint32_t id) {
  if (t.is_param() && t.index() == id) return NamedType::bound(0);
  if (!t.is_inst()) return t;
  std::vector<NamedType> args;
  for (const auto& a : t.args()) args.push_back(bind(a, id));
  return NamedType::inst(t.head(), std::move(args));
}

std::vector<std::string> unique_names(std::vector<std::string> names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    while (std::count(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(i), names[i]) > 0) names[i] += "'";
  }
  return names;
}

}  // namespace

StructuralType Elaborator::star(const SurfaceType& t, Scope& scope) {
  using surface::Ctor, surface::Param, surface::Bound, surface::Product, surface::Unit, surface::Variant,
      surface::Record, surface::Arrow, surface::Forall, surface::Exists;
  auto fields = [&](const std::vector<SurfaceField>& fs) {
    std::vector<Field> out;
    for (const auto& f : fs) out.push_back(Field{f.label, dagger(f.type, scope)});
    return make_fields(std::move(out));
  };
  auto quantified = [&](const std::string& binder, const SurfaceType& body) {
    auto id = static_cast<std::uint32_t>(param_hints_.size());
    param_hints_.push_back(binder);
    scope.binders.push_back(id);
    NamedType inner = dagger(body, scope);
    scope.binders.pop_back();
    return bind(inner, id);
  };
  return std::visit(
      overloaded{
          [&](const Product& p) -> StructuralType { return paramsub::Product{dagger(p.left, scope), dagger(p.right, scope)}; },
          [&](const Unit&) -> StructuralType { return paramsub::Unit{}; },
          [&](const Variant& v) -> StructuralType { return paramsub::Variant{fields(v.fields)}; },
          [&](const Record& r) -> StructuralType { return paramsub::Record{fields(r.fields)}; },
          [&](const Arrow& a) -> StructuralType {
            return paramsub::Arrow{dagger(a.domain, scope), dagger(a.codomain, scope)};
          },
          [&](const Forall& q) -> StructuralType { return paramsub::Forall{q.binder, quantified(q.binder, q.body)}; },
          [&](const Exists& q) -> StructuralType { return paramsub::Exists{q.binder, quantified(q.binder, q.body)}; },
          [&](const auto&) -> StructuralType {
            throw Error(ErrorKind::NonContractiveDefinition, "expected a structural type", t.span());
          },
      },
      t.node());
}

NamedType Elaborator::dagger(const SurfaceType& t, Scope& scope) {
  if (const auto* c = t.as<surface::Ctor>()) {
    auto head = sig_.find(c->name);
    if (!head) throw Error(ErrorKind::UnboundIdentifier, "'" + c->name + "' is not defined", t.span());
    if (sig_.at(*head).params.size() != c->args.size()) {
      throw Error(ErrorKind::ArityMismatch, "'" + c->name + "' applied to the wrong number of arguments", t.span());
    }
    std::vector<NamedType> args;
    for (const auto& a : c->args) args.push_back(dagger(a, scope));
    return NamedType::inst(*head, std::move(args));
  }
  if (const auto* p = t.as<surface::Param>()) {
    if (p->index >= scope.params.size()) throw Error(ErrorKind::OpenTypeInQuery, "free parameter '" + p->name + "'", t.span());
    return NamedType::param(scope.params[p->index]);
  }
  if (const auto* b = t.as<surface::Bound>()) {
    if (b->depth >= scope.binders.size()) throw Error(ErrorKind::UnboundIdentifier, "'" + b->name + "' is not bound", t.span());
    return NamedType::param(scope.binders[scope.binders.size() - 1 - b->depth]);
  }
  return mint(star(t, scope), scope);
}

NamedType Elaborator::mint(const StructuralType& body, Scope&) {
  std::vector<std::uint32_t> free;
  for (const auto& c : children(body)) free_params(c, free);
  auto limit = static_cast<std::uint32_t>(param_hints_.size());
  StructuralType canonical = substitute(body, renaming(free, limit));
  std::vector<NamedType> args;
  for (auto id : free) args.push_back(NamedType::param(id));

  if (options_.share) {
    if (auto it = shared_.find(canonical); it != shared_.end()) return NamedType::inst(it->second, std::move(args));
  }
  std::vector<std::string> names;
  for (auto id : free) names.push_back(param_hints_[id]);
  std::string name;
  do {
    name = "%g" + std::to_string(++counter_);
  } while (sig_.find(name));
  ConstructorId id = sig_.add(Definition{name, unique_names(std::move(names)), canonical, Origin::Internal});
  if (options_.share) shared_.emplace(std::move(canonical), id);
  return NamedType::inst(id, std::move(args));
}

void Elaborator::add_definitions(const SourceFile& expanded) {
  std::vector<ConstructorId> ids;
  for (const auto& d : expanded.items) {
    if (d.kind == DefinitionKind::Abbreviation) {
      throw Error(ErrorKind::Internal, "abbreviation '" + d.name + "' must be expanded first", d.span);
    }
    if (!d.body.is_structural()) {
      throw Error(ErrorKind::NonContractiveDefinition,
                  "the body of '" + d.name + "' must start with a structural type constructor", d.span);
    }
    try {
      ids.push_back(sig_.add(Definition{d.name, d.params, Unit{}, d.origin}));
    } catch (const Error& e) {
      throw Error(e.kind(), e.message(), d.span);
    }
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& d = expanded.items[i];
    Scope scope;
    for (const auto& p : d.params) {
      scope.params.push_back(static_cast<std::uint32_t>(param_hints_.size()));
      param_hints_.push_back(p);
    }
    StructuralType body = star(d.body, scope);
    body = substitute(body, renaming(scope.params, static_cast<std::uint32_t>(param_hints_.size())));
    if (d.origin == Origin::Internal && options_.share) shared_.emplace(body, ids[i]);
    sig_.set_body(ids[i], std::move(body));
  }
}

NamedType Elaborator::elaborate_closed(const SurfaceType& t) {
  Scope scope;
  NamedType out = dagger(t, scope);
  if (has_params(out)) throw Error(ErrorKind::OpenTypeInQuery, "query types must be closed", t.span());
  return out;
}

Signature normalize_signature(const SourceFile& expanded, NormalizeOptions options) {
  Elaborator e(options);
  e.add_definitions(expanded);
  return e.signature();
}

Signature elaborate(const SourceFile& file, NormalizeOptions options) {
  return normalize_signature(expand_abbreviations(file), options);
}

namespace {

void validate_named(const Signature& sig, const Definition& d, const NamedType& t, bool under_binder,
                    std::vector<Diagnostic>& out) {
  switch (t.kind()) {
    case NamedType::Kind::Inst:
      if (t.head() >= sig.size()) {
        out.push_back({d.name, "reference to undefined constructor #" + std::to_string(t.head())});
        return;
      }
      if (t.args().size() != sig.at(t.head()).params.size()) {
        out.push_back({d.name, "'" + sig.at(t.head()).name + "' expects " +
                                   std::to_string(sig.at(t.head()).params.size()) + " argument(s), given " +
                                   std::to_string(t.args().size())});
      }
      for (const auto& a : t.args()) validate_named(sig, d, a, under_binder, out);
      return;
    case NamedType::Kind::Param:
      if (t.index() >= d.params.size()) out.push_back({d.name, "parameter #" + std::to_string(t.index()) + " is out of range"});
      return;
    case NamedType::Kind::BoundVar:
      if (!under_binder || t.index() != 0) out.push_back({d.name, "variable is not bound by the body's binder"});
      return;
    case NamedType::Kind::FreeVar:
      out.push_back({d.name, "free variable in a definition body"});
      return;
  }
}

void alternation(const SurfaceDefinition& d, const SurfaceType& t, std::vector<Diagnostic>& out) {
  if (t.is_structural()) {
    out.push_back({d.name, "structural type in a named position"});
    return;
  }
  if (const auto* c = t.as<surface::Ctor>()) {
    for (const auto& a : c->args) alternation(d, a, out);
  }
}

}  // namespace

std::vector<Diagnostic> validate(const Signature& sig) {
  std::vector<Diagnostic> out;
  for (const auto& d : sig.definitions()) {
    bool binder = std::holds_alternative<Forall>(d.body) || std::holds_alternative<Exists>(d.body);
    for (const auto& c : children(d.body)) validate_named(sig, d, c, binder, out);
  }
  return out;
}

std::vector<Diagnostic> check_normal_form(const SourceFile& file) {
  using surface::Ctor, surface::Param, surface::Bound, surface::Product, surface::Unit, surface::Variant,
      surface::Record, surface::Arrow, surface::Forall, surface::Exists;
  std::vector<Diagnostic> out;
  for (const auto& d : file.items) {
    if (d.kind == DefinitionKind::Abbreviation) {
      out.push_back({d.name, "abbreviations do not occur in normal form"});
      continue;
    }
    if (!d.body.is_structural()) {
      out.push_back({d.name, "body is not structural at the top"});
      continue;
    }
    auto named = [&](const SurfaceType& c) { alternation(d, c, out); };
    std::visit(overloaded{
                   [&](const Product& p) {
                     named(p.left);
                     named(p.right);
                   },
                   [&](const Variant& v) {
                     for (const auto& f : v.fields) named(f.type);
                   },
                   [&](const Record& r) {
                     for (const auto& f : r.fields) named(f.type);
                   },
                   [&](const Arrow& a) {
                     named(a.domain);
                     named(a.codomain);
                   },
                   [&](const Forall& q) { named(q.body); },
                   [&](const Exists& q) { named(q.body); },
                   [](const auto&) {},
               },
               d.body.node());
  }
  return out;
}

namespace {

SurfaceType named_to_surface(const Signature& sig, const NamedType& t, const Definition& d, const std::string& binder) {
  switch (t.kind()) {
    case NamedType::Kind::Inst: {
      std::vector<SurfaceType> args;
      for (const auto& a : t.args()) args.push_back(named_to_surface(sig, a, d, binder));
      return SurfaceType(surface::Ctor{sig.at(t.head()).name, std::move(args)});
    }
    case NamedType::Kind::Param:
      return SurfaceType(surface::Param{t.index(), d.params.at(t.index())});
    case NamedType::Kind::BoundVar:
      return SurfaceType(surface::Bound{t.index(), binder});
    case NamedType::Kind::FreeVar:
      break;
  }
  throw Error(ErrorKind::Internal, "free variable in a definition body of '" + d.name + "'");
}

}  // namespace

SourceFile to_surface(const Signature& sig) {
  SourceFile out;
  for (const auto& d : sig.definitions()) {
    auto named = [&](const NamedType& t, const std::string& binder = "") { return named_to_surface(sig, t, d, binder); };
    auto fields = [&](const std::vector<Field>& fs) {
      std::vector<SurfaceField> r;
      for (const auto& f : fs) r.push_back(SurfaceField{f.label, named(f.type)});
      return r;
    };
    SurfaceType body = std::visit(
        overloaded{
            [&](const Product& p) { return SurfaceType(surface::Product{named(p.left), named(p.right)}); },
            [&](const Unit&) { return SurfaceType(surface::Unit{}); },
            [&](const Variant& v) { return SurfaceType(surface::Variant{fields(v.fields)}); },
            [&](const Record& r) { return SurfaceType(surface::Record{fields(r.fields)}); },
            [&](const Arrow& a) { return SurfaceType(surface::Arrow{named(a.domain), named(a.codomain)}); },
            [&](const Forall& q) { return SurfaceType(surface::Forall{q.binder, named(q.body, q.binder)}); },
            [&](const Exists& q) { return SurfaceType(surface::Exists{q.binder, named(q.body, q.binder)}); },
        },
        d.body);
    out.items.push_back(SurfaceDefinition{DefinitionKind::Defined, d.name, d.params, body, d.origin, {}});
  }
  return out;
}

}  // namespace paramsub
