#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "paramsub/error.hpp"
#include "paramsub/syntax.hpp"

namespace paramsub {

class SurfaceType;

namespace surface {
struct Ctor;
struct Param;
struct Bound;
struct Product;
struct Unit;
struct Variant;
struct Record;
struct Arrow;
struct Forall;
struct Exists;
}  // namespace surface

// Programmer-facing type before normalization. Identifiers are already
// resolved: parameters by position, bound variables by de Bruijn index, and
// constructors by name.
class SurfaceType {
 public:
  using Node = std::variant<surface::Ctor, surface::Param, surface::Bound, surface::Product, surface::Unit,
                            surface::Variant, surface::Record, surface::Arrow, surface::Forall, surface::Exists>;

  // Any alternative of Node, or a Node.
  template <class Alt>
    requires(!std::is_same_v<std::decay_t<Alt>, SurfaceType>)
  SurfaceType(Alt alt, Span span = {});

  const Node& node() const noexcept;
  const Span& span() const noexcept { return span_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(node_.get());
  }
  bool is_structural() const noexcept;

 private:
  std::shared_ptr<const Node> node_;
  Span span_;
};

struct SurfaceField {
  Label label;
  SurfaceType type;
};

namespace surface {
struct Ctor {
  std::string name;
  std::vector<SurfaceType> args;
};
struct Param {
  std::uint32_t index;
  std::string name;
};
struct Bound {
  std::uint32_t depth;
  std::string name;
};
struct Product {
  SurfaceType left;
  SurfaceType right;
};
struct Unit {};
struct Variant {
  std::vector<SurfaceField> fields;  // source order
};
struct Record {
  std::vector<SurfaceField> fields;
};
struct Arrow {
  SurfaceType domain;
  SurfaceType codomain;
};
struct Forall {
  std::string binder;
  SurfaceType body;
};
struct Exists {
  std::string binder;
  SurfaceType body;
};
}  // namespace surface

inline const SurfaceType::Node& SurfaceType::node() const noexcept { return *node_; }

template <class Alt>
  requires(!std::is_same_v<std::decay_t<Alt>, SurfaceType>)
SurfaceType::SurfaceType(Alt alt, Span span)
    : node_(std::make_shared<const Node>(std::move(alt))), span_(span) {}

enum class DefinitionKind : std::uint8_t { Defined, Abbreviation };

struct SurfaceDefinition {
  DefinitionKind kind = DefinitionKind::Defined;
  std::string name;
  std::vector<std::string> params;
  SurfaceType body;
  Origin origin = Origin::User;
  Span span;
};

// A parsed file: the surface signature, in source order.
struct SourceFile {
  std::vector<SurfaceDefinition> items;

  const SurfaceDefinition* find(std::string_view name) const;
};

struct Query {
  SurfaceType left;
  SurfaceType right;
  Variance variance = Variance::Plus;
};

// Structural equality ignoring spans and binder names.
bool operator==(const SurfaceType& a, const SurfaceType& b);

// Replaces parameter i by args[i]; arguments are shifted under binders.
SurfaceType instantiate(const SurfaceType& body, const std::vector<SurfaceType>& args);

// Adds `amount` to every bound-variable index >= cutoff.
SurfaceType shift(const SurfaceType& t, std::uint32_t amount, std::uint32_t cutoff = 0);

bool has_free_params(const SurfaceType& t);

// Names of constructors referenced anywhere in t, in first-occurrence order.
std::vector<std::string> referenced_constructors(const SurfaceType& t);

}  // namespace paramsub
