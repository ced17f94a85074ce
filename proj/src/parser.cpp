#include "paramsub/parser.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "paramsub/overloaded.hpp"

namespace paramsub {

namespace {

enum class Tok {
  Ident,
  One,
  Type,
  Abbrev,
  Forall,
  Exists,
  Plus,
  Amp,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Comma,
  Colon,
  Equals,
  Dot,
  Star,
  Arrow,
  Le,
  Ge,
  End,
};

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::One: return "'1'";
    case Tok::Type: return "'type'";
    case Tok::Abbrev: return "'abbrev'";
    case Tok::Forall: return "'forall'";
    case Tok::Exists: return "'exists'";
    case Tok::Plus: return "'+'";
    case Tok::Amp: return "'&'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Equals: return "'='";
    case Tok::Dot: return "'.'";
    case Tok::Star: return "'*'";
    case Tok::Arrow: return "'->'";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::End: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '$';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  SourcePos pos;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  static const std::unordered_map<std::string_view, Tok> keywords = {
      {"type", Tok::Type}, {"abbrev", Tok::Abbrev}, {"forall", Tok::Forall}, {"exists", Tok::Exists}};
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourcePos start = pos;
    auto emit = [&](Tok kind, std::size_t len) {
      std::string text(src.substr(i, len));
      advance(len);
      out.push_back(Token{kind, std::move(text), Span{start, pos}});
    };
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      auto word = src.substr(i, j - i);
      auto kw = keywords.find(word);
      emit(kw == keywords.end() ? Tok::Ident : kw->second, j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "->") { emit(Tok::Arrow, 2); continue; }
    if (two == "<=") { emit(Tok::Le, 2); continue; }
    if (two == ">=") { emit(Tok::Ge, 2); continue; }
    switch (c) {
      case '1':
        if (i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1]))) break;
        emit(Tok::One, 1);
        continue;
      case '+': emit(Tok::Plus, 1); continue;
      case '&': emit(Tok::Amp, 1); continue;
      case '{': emit(Tok::LBrace, 1); continue;
      case '}': emit(Tok::RBrace, 1); continue;
      case '[': emit(Tok::LBracket, 1); continue;
      case ']': emit(Tok::RBracket, 1); continue;
      case '(': emit(Tok::LParen, 1); continue;
      case ')': emit(Tok::RParen, 1); continue;
      case ',': emit(Tok::Comma, 1); continue;
      case ':': emit(Tok::Colon, 1); continue;
      case '=': emit(Tok::Equals, 1); continue;
      case '.': emit(Tok::Dot, 1); continue;
      case '*': emit(Tok::Star, 1); continue;
      default: break;
    }
    throw Error(ErrorKind::Syntax, "unexpected character '" + std::string(1, c) + "'", Span{start, start});
  }
  out.push_back(Token{Tok::End, "", Span{pos, pos}});
  return out;
}

constexpr int kMaxNesting = 256;

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  SourceFile file() {
    SourceFile out;
    while (!at(Tok::End)) out.items.push_back(item());
    return out;
  }

  Query query() {
    auto left = closed_type();
    bool swap = false;
    if (at(Tok::Ge)) {
      swap = true;
    } else if (!at(Tok::Le)) {
      fail("expected '<=' or '>='");
    }
    ++pos_;
    auto right = closed_type();
    expect(Tok::End);
    if (swap) return Query{right, left, Variance::Plus};
    return Query{left, right, Variance::Plus};
  }

  SurfaceType single() {
    auto t = closed_type();
    expect(Tok::End);
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }

  [[noreturn]] void fail(const std::string& what) const {
    const auto& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorKind::Syntax, what + ", found " + found, t.span);
  }

  const Token& expect(Tok k) {
    if (!at(k)) fail("expected " + std::string(describe(k)));
    return toks_[pos_++];
  }

  SurfaceDefinition item() {
    SourcePos begin = peek().span.begin;
    DefinitionKind kind;
    if (at(Tok::Type)) {
      kind = DefinitionKind::Defined;
    } else if (at(Tok::Abbrev)) {
      kind = DefinitionKind::Abbreviation;
    } else {
      fail("expected 'type' or 'abbrev'");
    }
    ++pos_;
    std::string name = expect(Tok::Ident).text;
    params_.clear();
    if (at(Tok::LBracket)) {
      ++pos_;
      do {
        const auto& p = expect(Tok::Ident);
        if (std::find(params_.begin(), params_.end(), p.text) != params_.end()) {
          throw Error(ErrorKind::Syntax, "parameter '" + p.text + "' is declared twice", p.span);
        }
        params_.push_back(p.text);
      } while (accept(Tok::Comma));
      expect(Tok::RBracket);
    }
    expect(Tok::Equals);
    auto body = ty();
    SourcePos end = toks_[pos_ - 1].span.end;
    auto params = params_;
    params_.clear();
    return SurfaceDefinition{kind, std::move(name), std::move(params), std::move(body), Origin::User, Span{begin, end}};
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }

  SurfaceType closed_type() {
    params_.clear();
    binders_.clear();
    return ty();
  }

  struct Nest {
    explicit Nest(Parser& p) : p(p) {
      if (++p.depth_ > kMaxNesting) p.fail("types nest too deeply");
    }
    ~Nest() { --p.depth_; }
    Parser& p;
  };

  Span from(SourcePos begin) const { return Span{begin, toks_[pos_ - 1].span.end}; }

  SurfaceType ty() {
    Nest guard(*this);
    SourcePos begin = peek().span.begin;
    if (at(Tok::Forall) || at(Tok::Exists)) {
      bool universal = at(Tok::Forall);
      ++pos_;
      std::string binder = expect(Tok::Ident).text;
      expect(Tok::Dot);
      binders_.push_back(binder);
      auto body = ty();
      binders_.pop_back();
      if (universal) return SurfaceType(surface::Forall{binder, body}, from(begin));
      return SurfaceType(surface::Exists{binder, body}, from(begin));
    }
    auto left = prod();
    if (accept(Tok::Arrow)) {
      auto right = ty();
      return SurfaceType(surface::Arrow{left, right}, from(begin));
    }
    return left;
  }

  SurfaceType prod() {
    SourcePos begin = peek().span.begin;
    auto left = atom();
    while (accept(Tok::Star)) {
      auto right = atom();
      left = SurfaceType(surface::Product{left, right}, from(begin));
    }
    return left;
  }

  std::vector<SurfaceField> fields() {
    std::vector<SurfaceField> out;
    if (at(Tok::RBrace)) return out;
    do {
      const auto& label = expect(Tok::Ident);
      for (const auto& f : out) {
        if (f.label == label.text) {
          throw Error(ErrorKind::DuplicateLabel, "label '" + label.text + "' appears twice", label.span);
        }
      }
      std::string text = label.text;
      expect(Tok::Colon);
      out.push_back(SurfaceField{text, ty()});
    } while (accept(Tok::Comma));
    return out;
  }

  SurfaceType atom() {
    Nest guard(*this);
    SourcePos begin = peek().span.begin;
    if (accept(Tok::One)) return SurfaceType(surface::Unit{}, from(begin));
    if (at(Tok::Plus) || at(Tok::Amp)) {
      bool variant = at(Tok::Plus);
      ++pos_;
      expect(Tok::LBrace);
      auto fs = fields();
      expect(Tok::RBrace);
      if (variant) return SurfaceType(surface::Variant{std::move(fs)}, from(begin));
      return SurfaceType(surface::Record{std::move(fs)}, from(begin));
    }
    if (accept(Tok::LParen)) {
      auto inner = ty();
      expect(Tok::RParen);
      return inner;
    }
    if (at(Tok::Ident)) {
      const Token& id = toks_[pos_++];
      std::string name = id.text;
      for (std::size_t k = binders_.size(); k-- > 0;) {
        if (binders_[k] == name) {
          no_args(name);
          return SurfaceType(surface::Bound{static_cast<std::uint32_t>(binders_.size() - 1 - k), name}, id.span);
        }
      }
      auto p = std::find(params_.begin(), params_.end(), name);
      if (p != params_.end()) {
        no_args(name);
        return SurfaceType(surface::Param{static_cast<std::uint32_t>(p - params_.begin()), name}, id.span);
      }
      std::vector<SurfaceType> args;
      if (accept(Tok::LBracket)) {
        do {
          args.push_back(ty());
        } while (accept(Tok::Comma));
        expect(Tok::RBracket);
      }
      return SurfaceType(surface::Ctor{name, std::move(args)}, from(begin));
    }
    fail("expected a type");
  }

  void no_args(const std::string& name) {
    if (at(Tok::LBracket)) {
      throw Error(ErrorKind::ArityMismatch, "'" + name + "' is a variable and takes no arguments", peek().span);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::vector<std::string> params_;
  std::vector<std::string> binders_;
};

// Checks constructor references against the names and arities in scope.
void resolve(const SurfaceType& t, const std::unordered_map<std::string, std::size_t>& arity) {
  using surface::Ctor, surface::Param, surface::Bound, surface::Product, surface::Unit, surface::Variant,
      surface::Record, surface::Arrow, surface::Forall, surface::Exists;
  std::visit(overloaded{
                 [&](const Ctor& c) {
                   auto it = arity.find(c.name);
                   if (it == arity.end()) {
                     throw Error(ErrorKind::UnboundIdentifier, "'" + c.name + "' is not defined", t.span());
                   }
                   if (it->second != c.args.size()) {
                     throw Error(ErrorKind::ArityMismatch,
                                 "'" + c.name + "' expects " + std::to_string(it->second) + " argument(s), given " +
                                     std::to_string(c.args.size()),
                                 t.span());
                   }
                   for (const auto& a : c.args) resolve(a, arity);
                 },
                 [&](const Product& p) {
                   resolve(p.left, arity);
                   resolve(p.right, arity);
                 },
                 [&](const Variant& v) {
                   for (const auto& f : v.fields) resolve(f.type, arity);
                 },
                 [&](const Record& r) {
                   for (const auto& f : r.fields) resolve(f.type, arity);
                 },
                 [&](const Arrow& a) {
                   resolve(a.domain, arity);
                   resolve(a.codomain, arity);
                 },
                 [&](const Forall& q) { resolve(q.body, arity); },
                 [&](const Exists& q) { resolve(q.body, arity); },
                 [](const auto&) {},
             },
             t.node());
}

std::unordered_map<std::string, std::size_t> arities(const SourceFile& file) {
  std::unordered_map<std::string, std::size_t> out;
  for (const auto& d : file.items) out.emplace(d.name, d.params.size());
  return out;
}

}  // namespace

SourceFile parse_signature(std::string_view text) {
  Parser p(text);
  SourceFile file = p.file();
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& d : file.items) {
    if (!seen.emplace(d.name, d.params.size()).second) {
      throw Error(ErrorKind::DuplicateDefinition, "'" + d.name + "' is defined twice", d.span);
    }
  }
  for (const auto& d : file.items) resolve(d.body, seen);
  return file;
}

Query parse_query(std::string_view text, const SourceFile& scope) {
  Parser p(text);
  Query q = p.query();
  auto arity = arities(scope);
  resolve(q.left, arity);
  resolve(q.right, arity);
  return q;
}

SurfaceType parse_type(std::string_view text, const SourceFile& scope) {
  Parser p(text);
  SurfaceType t = p.single();
  resolve(t, arities(scope));
  return t;
}

}  // namespace paramsub
