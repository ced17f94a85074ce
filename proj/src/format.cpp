#include "paramsub/format.hpp"

#include <algorithm>

#include "paramsub/overloaded.hpp"

namespace paramsub {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

template <class Fields, class Print>
std::string format_fields(std::string_view open, const Fields& fields, Print print) {
  std::string out(open);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ", ";
    out += fields[i].label + ": " + print(fields[i].type);
  }
  return out + "}";
}

}  // namespace

std::string format(const Signature& sig, const NamedType& t, const Names& names) {
  switch (t.kind()) {
    case NamedType::Kind::Inst: {
      std::string out = sig.at(t.head()).name;
      if (!t.args().empty()) {
        std::vector<std::string> args;
        for (const auto& a : t.args()) args.push_back(format(sig, a, names));
        out += "[" + join(args) + "]";
      }
      return out;
    }
    case NamedType::Kind::Param:
      if (t.index() < names.params.size()) return names.params[t.index()];
      return "#" + std::to_string(t.index());
    case NamedType::Kind::BoundVar:
      return t.index() == 0 ? names.var : "^" + std::to_string(t.index());
    case NamedType::Kind::FreeVar:
      return t.index() == 0 ? names.var : names.var + std::to_string(t.index());
  }
  return "?";
}

std::string format(const Signature& sig, const StructuralType& s, const Names& names) {
  auto named = [&](const NamedType& t) { return format(sig, t, names); };
  return std::visit(overloaded{
                        [&](const Product& p) { return named(p.left) + " * " + named(p.right); },
                        [&](const Unit&) { return std::string("1"); },
                        [&](const Variant& v) { return format_fields("+{", v.fields, named); },
                        [&](const Record& r) { return format_fields("&{", r.fields, named); },
                        [&](const Arrow& a) { return named(a.domain) + " -> " + named(a.codomain); },
                        [&](const Forall& q) {
                          Names inner = names;
                          inner.var = q.binder;
                          return "forall " + q.binder + ". " + format(sig, q.body, inner);
                        },
                        [&](const Exists& q) {
                          Names inner = names;
                          inner.var = q.binder;
                          return "exists " + q.binder + ". " + format(sig, q.body, inner);
                        },
                    },
                    s);
}

std::string format_head(const Signature& sig, ConstructorId id, const std::vector<std::string>& params) {
  std::string out = sig.at(id).name;
  if (!params.empty()) out += "[" + join(params) + "]";
  return out;
}

std::string format_definition(const Signature& sig, ConstructorId id) {
  const auto& d = sig.at(id);
  return "type " + format_head(sig, id, d.params) + " = " + format(sig, d.body, Names{d.params});
}

std::string format_signature(const Signature& sig) {
  std::string out;
  for (ConstructorId id = 0; id < sig.size(); ++id) out += format_definition(sig, id) + "\n";
  return out;
}

std::vector<std::string> right_names(const std::vector<std::string>& left, const std::vector<std::string>& right) {
  std::vector<std::string> out = right;
  auto collides = [&] {
    return std::any_of(out.begin(), out.end(),
                       [&](const std::string& n) { return std::find(left.begin(), left.end(), n) != left.end(); });
  };
  while (collides()) {
    for (auto& n : out) n += "'";
  }
  return out;
}

std::string format_pair(const Signature& sig, const PairKey& key) {
  const auto& t = sig.at(key.left);
  const auto& u = sig.at(key.right);
  return format_head(sig, key.left, t.params) + (key.variance == Variance::Plus ? " <= " : " >= ") +
         format_head(sig, key.right, right_names(t.params, u.params));
}

std::string format_atom(const Atom& a, const std::vector<std::string>& left, const std::vector<std::string>& right) {
  const std::string& l = a.left < left.size() ? left[a.left] : "#" + std::to_string(a.left);
  const std::string& r = a.right < right.size() ? right[a.right] : "#" + std::to_string(a.right);
  return a.variance == Variance::Plus ? l + " <= " + r : r + " <= " + l;
}

namespace {

enum Prec { kTy = 0, kArrow = 1, kProd = 2, kAtom = 3 };

class SurfacePrinter {
 public:
  explicit SurfacePrinter(std::vector<std::string> params) : params_(std::move(params)) {}

  std::string print(const SurfaceType& t, int context) {
    auto [text, prec] = render(t);
    return prec < context ? "(" + text + ")" : text;
  }

  std::vector<std::string> binders;

 private:
  std::string fresh_binder(const std::string& hint) {
    std::string name = hint;
    auto taken = [&](const std::string& n) {
      return std::find(binders.begin(), binders.end(), n) != binders.end() ||
             std::find(params_.begin(), params_.end(), n) != params_.end();
    };
    while (taken(name)) name += "'";
    return name;
  }

  std::string quant(std::string_view kw, const std::string& hint, const SurfaceType& body) {
    std::string name = fresh_binder(hint);
    binders.push_back(name);
    std::string out = std::string(kw) + " " + name + ". " + print(body, kTy);
    binders.pop_back();
    return out;
  }

  std::pair<std::string, int> render(const SurfaceType& t) {
    using surface::Ctor, surface::Param, surface::Bound, surface::Product, surface::Unit, surface::Variant,
      surface::Record, surface::Arrow, surface::Forall, surface::Exists;
    auto ty = [&](const SurfaceType& c) { return print(c, kTy); };
    return std::visit(
        overloaded{
            [&](const Ctor& c) -> std::pair<std::string, int> {
              std::string out = c.name;
              if (!c.args.empty()) {
                std::vector<std::string> args;
                for (const auto& a : c.args) args.push_back(ty(a));
                out += "[" + join(args) + "]";
              }
              return {out, kAtom};
            },
            [&](const Param& p) -> std::pair<std::string, int> {
              return {p.index < params_.size() ? params_[p.index] : p.name, kAtom};
            },
            [&](const Bound& b) -> std::pair<std::string, int> {
              if (b.depth < binders.size()) return {binders[binders.size() - 1 - b.depth], kAtom};
              return {b.name, kAtom};
            },
            [&](const Product& p) -> std::pair<std::string, int> {
              return {print(p.left, kProd) + " * " + print(p.right, kAtom), kProd};
            },
            [&](const Unit&) -> std::pair<std::string, int> { return {"1", kAtom}; },
            [&](const Variant& v) -> std::pair<std::string, int> { return {format_fields("+{", v.fields, ty), kAtom}; },
            [&](const Record& r) -> std::pair<std::string, int> { return {format_fields("&{", r.fields, ty), kAtom}; },
            [&](const Arrow& a) -> std::pair<std::string, int> {
              return {print(a.domain, kProd) + " -> " + print(a.codomain, kTy), kArrow};
            },
            [&](const Forall& q) -> std::pair<std::string, int> { return {quant("forall", q.binder, q.body), kTy}; },
            [&](const Exists& q) -> std::pair<std::string, int> { return {quant("exists", q.binder, q.body), kTy}; },
        },
        t.node());
  }

  std::vector<std::string> params_;
};

}  // namespace

std::string format(const SurfaceType& t, const std::vector<std::string>& params,
                   const std::vector<std::string>& binders) {
  SurfacePrinter p(params);
  p.binders = binders;
  return p.print(t, kTy);
}

std::string format(const SourceFile& file) {
  std::string out;
  for (const auto& d : file.items) {
    out += d.kind == DefinitionKind::Defined ? "type " : "abbrev ";
    out += d.name;
    if (!d.params.empty()) out += "[" + join(d.params) + "]";
    out += " = " + format(d.body, d.params) + "\n";
  }
  return out;
}

std::string format(const Query& q) {
  return format(q.left) + (q.variance == Variance::Plus ? " <= " : " >= ") + format(q.right);
}

}  // namespace paramsub
