#include "paramsub/surface.hpp"

#include <algorithm>

#include "paramsub/overloaded.hpp"

namespace paramsub {

bool SurfaceType::is_structural() const noexcept {
  return !(as<surface::Ctor>() || as<surface::Param>() || as<surface::Bound>());
}

const SurfaceDefinition* SourceFile::find(std::string_view name) const {
  for (const auto& d : items) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

namespace {

bool fields_equal(const std::vector<SurfaceField>& a, const std::vector<SurfaceField>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].label != b[i].label || !(a[i].type == b[i].type)) return false;
  }
  return true;
}

template <class F>
std::vector<SurfaceField> map_fields(const std::vector<SurfaceField>& fields, F f) {
  std::vector<SurfaceField> out;
  out.reserve(fields.size());
  for (const auto& fl : fields) out.push_back(SurfaceField{fl.label, f(fl.type)});
  return out;
}

// Generic rebuild: `leaf` handles Param/Bound given the current binder depth.
template <class Leaf>
SurfaceType rebuild(const SurfaceType& t, std::uint32_t depth, Leaf& leaf) {
  using surface::Ctor, surface::Param, surface::Bound, surface::Product, surface::Unit, surface::Variant,
      surface::Record, surface::Arrow, surface::Forall, surface::Exists;
  auto rec = [&](const SurfaceType& c) { return rebuild(c, depth, leaf); };
  auto under = [&](const SurfaceType& c) { return rebuild(c, depth + 1, leaf); };
  return std::visit(
      overloaded{
          [&](const Ctor& c) -> SurfaceType {
            std::vector<SurfaceType> args;
            for (const auto& a : c.args) args.push_back(rec(a));
            return SurfaceType(Ctor{c.name, std::move(args)}, t.span());
          },
          [&](const Param&) -> SurfaceType { return leaf(t, depth); },
          [&](const Bound&) -> SurfaceType { return leaf(t, depth); },
          [&](const Product& p) -> SurfaceType { return SurfaceType(Product{rec(p.left), rec(p.right)}, t.span()); },
          [&](const Unit&) -> SurfaceType { return t; },
          [&](const Variant& v) -> SurfaceType { return SurfaceType(Variant{map_fields(v.fields, rec)}, t.span()); },
          [&](const Record& r) -> SurfaceType { return SurfaceType(Record{map_fields(r.fields, rec)}, t.span()); },
          [&](const Arrow& a) -> SurfaceType {
            return SurfaceType(Arrow{rec(a.domain), rec(a.codomain)}, t.span());
          },
          [&](const Forall& q) -> SurfaceType { return SurfaceType(Forall{q.binder, under(q.body)}, t.span()); },
          [&](const Exists& q) -> SurfaceType { return SurfaceType(Exists{q.binder, under(q.body)}, t.span()); },
      },
      t.node());
}

}  // namespace

bool operator==(const SurfaceType& a, const SurfaceType& b) {
  using surface::Ctor, surface::Param, surface::Bound, surface::Product, surface::Unit, surface::Variant,
      surface::Record, surface::Arrow, surface::Forall, surface::Exists;
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      overloaded{
          [&](const Ctor& c) {
            const auto& d = *b.as<Ctor>();
            return c.name == d.name && c.args == d.args;
          },
          [&](const Param& p) { return p.index == b.as<Param>()->index; },
          [&](const Bound& v) { return v.depth == b.as<Bound>()->depth; },
          [&](const Product& p) {
            const auto& q = *b.as<Product>();
            return p.left == q.left && p.right == q.right;
          },
          [&](const Unit&) { return true; },
          [&](const Variant& v) { return fields_equal(v.fields, b.as<Variant>()->fields); },
          [&](const Record& r) { return fields_equal(r.fields, b.as<Record>()->fields); },
          [&](const Arrow& x) {
            const auto& y = *b.as<Arrow>();
            return x.domain == y.domain && x.codomain == y.codomain;
          },
          [&](const Forall& q) { return q.body == b.as<Forall>()->body; },
          [&](const Exists& q) { return q.body == b.as<Exists>()->body; },
      },
      a.node());
}

SurfaceType shift(const SurfaceType& t, std::uint32_t amount, std::uint32_t cutoff) {
  if (amount == 0) return t;
  auto leaf = [&](const SurfaceType& l, std::uint32_t depth) -> SurfaceType {
    if (const auto* b = l.as<surface::Bound>(); b && b->depth >= cutoff + depth) {
      return SurfaceType(surface::Bound{b->depth + amount, b->name}, l.span());
    }
    return l;
  };
  return rebuild(t, 0, leaf);
}

SurfaceType instantiate(const SurfaceType& body, const std::vector<SurfaceType>& args) {
  auto leaf = [&](const SurfaceType& l, std::uint32_t depth) -> SurfaceType {
    if (const auto* p = l.as<surface::Param>()) {
      if (p->index >= args.size()) throw Error(ErrorKind::ArityMismatch, "parameter '" + p->name + "' has no argument");
      return shift(args[p->index], depth);
    }
    return l;
  };
  return rebuild(body, 0, leaf);
}

bool has_free_params(const SurfaceType& t) {
  bool found = false;
  auto leaf = [&](const SurfaceType& l, std::uint32_t) -> SurfaceType {
    if (l.as<surface::Param>()) found = true;
    return l;
  };
  rebuild(t, 0, leaf);
  return found;
}

namespace {

void collect_ctors(const SurfaceType& t, std::vector<std::string>& out) {
  using surface::Ctor, surface::Param, surface::Bound, surface::Product, surface::Unit, surface::Variant,
      surface::Record, surface::Arrow, surface::Forall, surface::Exists;
  std::visit(overloaded{
                 [&](const Ctor& c) {
                   if (std::find(out.begin(), out.end(), c.name) == out.end()) out.push_back(c.name);
                   for (const auto& a : c.args) collect_ctors(a, out);
                 },
                 [&](const Product& p) {
                   collect_ctors(p.left, out);
                   collect_ctors(p.right, out);
                 },
                 [&](const Variant& v) {
                   for (const auto& f : v.fields) collect_ctors(f.type, out);
                 },
                 [&](const Record& r) {
                   for (const auto& f : r.fields) collect_ctors(f.type, out);
                 },
                 [&](const Arrow& a) {
                   collect_ctors(a.domain, out);
                   collect_ctors(a.codomain, out);
                 },
                 [&](const Forall& q) { collect_ctors(q.body, out); },
                 [&](const Exists& q) { collect_ctors(q.body, out); },
                 [](const auto&) {},
             },
             t.node());
}

}  // namespace

std::vector<std::string> referenced_constructors(const SurfaceType& t) {
  std::vector<std::string> out;
  collect_ctors(t, out);
  return out;
}

}  // namespace paramsub
