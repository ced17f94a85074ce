#include "paramsub/bpa.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "paramsub/error.hpp"

namespace paramsub {

namespace {

bool reserved(std::string_view s) {
  return s == "type" || s == "abbrev" || s == "forall" || s == "exists" || s == "eps";
}

struct Token {
  enum class Kind { Ident, Equals, Plus, Dot, End } kind;
  std::string text;
  SourcePos pos;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&] {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
    ++i;
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      Token t{Token::Kind::Ident, {}, pos};
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        t.text += text[i];
        advance();
      }
      out.push_back(std::move(t));
    } else if (c == '=' || c == '+' || c == '.') {
      out.push_back(Token{c == '=' ? Token::Kind::Equals : c == '+' ? Token::Kind::Plus : Token::Kind::Dot,
                          std::string(1, c), pos});
      advance();
    } else {
      throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", Span{pos, pos});
    }
  }
  out.push_back(Token{Token::Kind::End, {}, pos});
  return out;
}

struct PendingTerm {
  Label action;
  std::vector<Token> word;
};

}  // namespace

std::optional<std::uint32_t> BpaSystem::find(std::string_view name) const {
  for (std::uint32_t i = 0; i < equations.size(); ++i) {
    if (equations[i].name == name) return i;
  }
  return std::nullopt;
}

BpaSystem parse_bpa(std::string_view text) {
  auto tokens = lex(text);
  std::size_t i = 0;
  auto expect = [&](Token::Kind k, std::string_view what) -> const Token& {
    if (tokens[i].kind != k) {
      throw Error(ErrorKind::Syntax, "expected " + std::string(what), Span{tokens[i].pos, tokens[i].pos});
    }
    return tokens[i++];
  };
  std::vector<std::pair<Token, std::vector<PendingTerm>>> raw;
  while (tokens[i].kind != Token::Kind::End) {
    Token name = expect(Token::Kind::Ident, "a process variable");
    expect(Token::Kind::Equals, "'='");
    std::vector<PendingTerm> terms;
    do {
      if (!terms.empty()) ++i;  // '+'
      PendingTerm term{expect(Token::Kind::Ident, "an action").text, {}};
      while (tokens[i].kind == Token::Kind::Dot) {
        ++i;
        term.word.push_back(expect(Token::Kind::Ident, "a process variable or 'eps'"));
      }
      terms.push_back(std::move(term));
    } while (tokens[i].kind == Token::Kind::Plus);
    raw.emplace_back(std::move(name), std::move(terms));
  }

  BpaSystem sys;
  for (const auto& [name, terms] : raw) {
    if (sys.find(name.text)) {
      throw Error(ErrorKind::InvalidSystem, "variable '" + name.text + "' is defined twice", Span{name.pos, name.pos});
    }
    sys.equations.push_back(BpaEquation{name.text, {}});
  }
  for (std::size_t e = 0; e < raw.size(); ++e) {
    for (const auto& term : raw[e].second) {
      BpaTerm out{term.action, {}};
      for (const auto& tok : term.word) {
        if (tok.text == "eps") {
          if (term.word.size() != 1) throw Error(ErrorKind::Syntax, "'eps' must stand alone", Span{tok.pos, tok.pos});
          continue;
        }
        auto v = sys.find(tok.text);
        if (!v) throw Error(ErrorKind::InvalidSystem, "undefined variable '" + tok.text + "'", Span{tok.pos, tok.pos});
        out.next.push_back(*v);
      }
      sys.equations[e].terms.push_back(std::move(out));
    }
  }
  validate(sys);
  return sys;
}

void validate(const BpaSystem& sys) {
  std::set<std::string> names;
  for (const auto& eq : sys.equations) {
    if (eq.name.empty() || reserved(eq.name)) throw Error(ErrorKind::InvalidSystem, "bad variable name '" + eq.name + "'");
    if (!names.insert(eq.name).second) throw Error(ErrorKind::InvalidSystem, "variable '" + eq.name + "' is defined twice");
    if (eq.terms.empty()) throw Error(ErrorKind::InvalidSystem, "variable '" + eq.name + "' has no transitions");
    std::set<Label> actions;
    for (const auto& t : eq.terms) {
      if (t.action.empty() || reserved(t.action)) throw Error(ErrorKind::InvalidSystem, "bad action '" + t.action + "'");
      if (!actions.insert(t.action).second) {
        throw Error(ErrorKind::InvalidSystem, "action '" + t.action + "' occurs twice in '" + eq.name + "'");
      }
      for (auto v : t.next) {
        if (v >= sys.equations.size()) throw Error(ErrorKind::InvalidSystem, "undefined variable in '" + eq.name + "'");
      }
    }
  }
}

BpaWord parse_word(const BpaSystem& sys, std::string_view text) {
  BpaWord out;
  std::string trimmed(text);
  trimmed.erase(std::remove_if(trimmed.begin(), trimmed.end(), [](unsigned char c) { return std::isspace(c); }),
                trimmed.end());
  if (trimmed == "eps" || trimmed.empty()) return out;
  std::size_t start = 0;
  while (start <= trimmed.size()) {
    std::size_t dot = trimmed.find('.', start);
    std::string name = trimmed.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    auto v = sys.find(name);
    if (!v) throw Error(ErrorKind::InvalidSystem, "undefined variable '" + name + "'");
    out.push_back(*v);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return out;
}

std::string format_word(const BpaSystem& sys, const BpaWord& word) {
  if (word.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += '.';
    out += sys.equations.at(word[i]).name;
  }
  return out;
}

std::string format_bpa(const BpaSystem& sys) {
  std::string out;
  for (const auto& eq : sys.equations) {
    out += eq.name + " =";
    for (std::size_t i = 0; i < eq.terms.size(); ++i) {
      out += i ? " + " : " ";
      out += eq.terms[i].action + "." + format_word(sys, eq.terms[i].next);
    }
    out += "\n";
  }
  return out;
}

std::string translate(const BpaSystem& sys, const BpaWord& word, std::string_view base) {
  std::string out(base);
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = "t" + sys.equations.at(*it).name + "[" + out + "]";
  return out;
}

std::string encode(const BpaSystem& sys, BpaFlavor flavor) {
  validate(sys);
  const bool with_end = flavor == BpaFlavor::RecordWithEnd;
  const std::string open = flavor == BpaFlavor::Variant ? "+{" : "&{";
  std::string out;
  if (with_end) {
    out += "type t0 = &{end$: t0}\n";
    out += "type " + std::string(kBpaBase) + " = &{end$: t0}\n";
  } else {
    out += "type " + std::string(kBpaBase) + " = " + open + "}\n";
  }
  for (const auto& eq : sys.equations) {
    out += "type t" + eq.name + "[al] = " + open;
    for (std::size_t i = 0; i < eq.terms.size(); ++i) {
      if (i) out += ", ";
      out += eq.terms[i].action + ": " + translate(sys, eq.terms[i].next, "al");
    }
    if (with_end) out += ", end$: t0";
    out += "}\n";
  }
  return out;
}

std::string simulation_query(const BpaSystem& sys, const BpaWord& p, const BpaWord& q, BpaFlavor flavor) {
  if (flavor == BpaFlavor::Variant) return translate(sys, p) + " <= " + translate(sys, q);
  return translate(sys, q) + " <= " + translate(sys, p);
}

std::vector<std::pair<Label, BpaWord>> transitions(const BpaSystem& sys, const BpaWord& word) {
  std::vector<std::pair<Label, BpaWord>> out;
  if (word.empty()) return out;
  for (const auto& term : sys.equations.at(word.front()).terms) {
    BpaWord next = term.next;
    next.insert(next.end(), word.begin() + 1, word.end());
    out.emplace_back(term.action, std::move(next));
  }
  return out;
}

SimulationOutcome bounded_simulation_refute(const BpaSystem& sys, const BpaWord& p, const BpaWord& q,
                                            std::size_t depth) {
  struct State {
    BpaWord p, q;
    std::vector<Label> actions;
  };
  std::set<std::pair<BpaWord, BpaWord>> seen{{p, q}};
  std::deque<State> pending{State{p, q, {}}};
  while (!pending.empty()) {
    State s = std::move(pending.front());
    pending.pop_front();
    if (s.actions.size() >= depth) continue;
    auto theirs = transitions(sys, s.q);
    for (auto& [action, next] : transitions(sys, s.p)) {
      auto match = std::find_if(theirs.begin(), theirs.end(), [&](const auto& t) { return t.first == action; });
      auto actions = s.actions;
      actions.push_back(action);
      if (match == theirs.end()) return SimulationOutcome{SimulationViolation{std::move(actions)}};
      if (seen.emplace(next, match->second).second) pending.push_back(State{next, match->second, std::move(actions)});
    }
  }
  return SimulationOutcome{NoCounterexample{depth}};
}

}  // namespace paramsub
