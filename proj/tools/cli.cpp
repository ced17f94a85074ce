#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include "paramsub/bpa.hpp"
#include "paramsub/elaborate.hpp"
#include "paramsub/error.hpp"
#include "paramsub/format.hpp"
#include "paramsub/oracle.hpp"
#include "paramsub/query.hpp"
#include "paramsub/saturate.hpp"
#include "paramsub/session.hpp"

namespace paramsub::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

// Input errors carry the file or query they came from.
struct Located {
  std::string where;
  Error error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Located{path, Error(ErrorKind::Syntax, "cannot read file")};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::unique_ptr<Session> load(const std::string& path) {
  std::string text = read_file(path);
  try {
    auto session = std::make_unique<Session>(text);
    auto problems = validate(session->signature());
    if (!problems.empty()) {
      throw Error(ErrorKind::Internal, problems.front().subject + ": " + problems.front().message);
    }
    return session;
  } catch (const Error& e) {
    throw Located{path, e};
  }
}

ClosedQuery load_query(Session& session, const std::string& text) {
  try {
    return session.query(text);
  } catch (const Error& e) {
    throw Located{"query", e};
  }
}

bool color() {
  const char* v = std::getenv("PARAMSUB_COLOR");
  return v && std::string_view(v) == "1";
}

std::string paint(const std::string& s, const char* code) {
  return color() ? std::string("\033[") + code + "m" + s + "\033[0m" : s;
}

SaturationOptions saturation_options(const std::optional<std::uint64_t>& seed,
                                     const std::optional<std::size_t>& max_facts) {
  return SaturationOptions{seed, max_facts};
}

std::string variance_text(Variance v) { return v == Variance::Plus ? "+" : "-"; }

std::pair<std::vector<std::string>, std::vector<std::string>> pair_names(const Signature& sig, const PairKey& key) {
  const auto& t = sig.at(key.left).params;
  return {t, right_names(t, sig.at(key.right).params)};
}

Json atom_json(const Signature& sig, const PairKey& key, const Atom& a) {
  auto [l, r] = pair_names(sig, key);
  return Json{{"left", l.at(a.left)},
              {"variance", variance_text(a.variance)},
              {"right", r.at(a.right)},
              {"text", format_atom(a, l, r)}};
}

Json trace_json(const Signature& sig, const RefutationTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    steps.push_back(Json{{"pair", s.key ? Json(format_pair(sig, *s.key)) : Json(nullptr)}, {"judgment", s.judgment}});
  }
  return Json{{"rule", rule_id(t.rule)}, {"rule_name", rule_name(t.rule)}, {"detail", t.detail}, {"steps", steps}};
}

Json path_json(const std::vector<PathStep>& path) {
  Json out = Json::array();
  for (const auto& s : path) out.push_back(to_string(s));
  return out;
}

std::string rule_line(const Signature& sig, const PairKey& key, const Rule& rule) {
  if (rule.is_valid()) {
    auto [l, r] = pair_names(sig, key);
    std::string out = format_pair(sig, key);
    for (std::size_t i = 0; i < rule.atoms().size(); ++i) out += (i ? ", " : " if ") + format_atom(rule.atoms()[i], l, r);
    return out;
  }
  std::string head = format_pair(sig, key);
  auto op = head.find(key.variance == Variance::Plus ? " <= " : " >= ");
  head.replace(op, 4, key.variance == Variance::Plus ? " </= " : " >/= ");
  return head + " (" + std::string(rule_name(rule.trace().rule)) + ": " + rule.trace().detail + ")";
}

Json rule_json(const Signature& sig, const PairKey& key, const Rule& rule) {
  Json j{{"left", sig.at(key.left).name},
         {"right", sig.at(key.right).name},
         {"variance", variance_text(key.variance)},
         {"valid", rule.is_valid()}};
  if (rule.is_valid()) {
    Json atoms = Json::array();
    for (const auto& a : rule.atoms()) atoms.push_back(atom_json(sig, key, a));
    j["atoms"] = atoms;
  } else {
    j["trace"] = trace_json(sig, rule.trace());
  }
  j["text"] = rule_line(sig, key, rule);
  return j;
}

std::vector<PairKey> selected_pairs(const Signature& sig, const std::vector<std::string>& pair) {
  if (pair.empty()) return all_user_pairs(sig);
  auto t = sig.require(pair[0]);
  auto u = sig.require(pair[1]);
  return {PairKey{t, u, Variance::Plus}, PairKey{t, u, Variance::Minus}};
}

// Every demanded pair, ordered by names so the output does not depend on
// the order in which pairs were discovered.
Json facts_json(const FactDatabase& db, bool traces) {
  const Signature& sig = db.signature();
  std::vector<EntryId> ids(db.size());
  for (EntryId i = 0; i < ids.size(); ++i) ids[i] = i;
  auto sort_key = [&](EntryId id) {
    const auto& k = db.entry(id).key;
    return std::tuple(sig.at(k.left).name, sig.at(k.right).name, k.variance);
  };
  std::sort(ids.begin(), ids.end(), [&](EntryId a, EntryId b) { return sort_key(a) < sort_key(b); });
  Json pairs = Json::array();
  for (EntryId id : ids) {
    const Entry& e = db.entry(id);
    Json j{{"left", sig.at(e.key.left).name},
           {"right", sig.at(e.key.right).name},
           {"variance", variance_text(e.key.variance)},
           {"bottom", e.bottom.has_value()}};
    if (e.bottom) {
      if (traces) j["bottom_trace"] = trace_json(sig, db.trace(id));
    } else {
      Json atoms = Json::array();
      for (const auto& [a, origin] : e.atoms) atoms.push_back(atom_json(sig, e.key, a)["text"]);
      j["constraints"] = atoms;
    }
    std::vector<std::string> facts;
    for (std::uint32_t k = 0; k < e.judgments.size(); ++k) facts.push_back(db.format_judgment(id, k));
    std::sort(facts.begin(), facts.end());
    j["facts"] = facts;
    j["processed"] = e.processed;
    j["bound"] = e.bound;
    pairs.push_back(std::move(j));
  }
  return Json{{"pairs", pairs}};
}

Json verdict_json(const Signature& sig, const std::string& text, const Verdict& v) {
  Json j{{"query", text}, {"verdict", v.yes() ? "yes" : "no"}};
  if (v.yes()) {
    j["derivation_nodes"] = node_count(v.derivation());
    return j;
  }
  const auto& r = v.refutation();
  j["reason"] = to_string(r.kind);
  Json context = Json::array();
  for (const auto& c : r.context) {
    context.push_back(Json{{"pair", format_pair(sig, c.key)}, {"atom", atom_json(sig, c.key, c.atom)["text"]}});
  }
  j["context"] = context;
  j["failing"] = format(sig, r.left) + (r.variance == Variance::Plus ? " <= " : " >= ") + format(sig, r.right);
  j["trace"] = trace_json(sig, r.trace);
  j["path"] = path_json(r.path);
  return j;
}

Json outcome_json(const RefuteOutcome& o) {
  if (!o.refuted()) return Json{{"result", "no-counterexample"}, {"depth", std::get<NoCounterexample>(o.result).depth}};
  const auto& v = o.violation();
  return Json{{"result", "violation"},
              {"depth", v.depth},
              {"rule", rule_id(v.rule)},
              {"detail", v.detail},
              {"path", path_json(v.path)}};
}

std::string outcome_text(const RefuteOutcome& o) {
  if (!o.refuted()) {
    return "no counterexample within " + std::to_string(std::get<NoCounterexample>(o.result).depth) + " unfoldings";
  }
  const auto& v = o.violation();
  return "violation at depth " + std::to_string(v.depth) + ": " + to_string(v.path) + " (" +
         std::string(rule_name(v.rule)) + ": " + v.detail + ")";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parametric subtyping for recursive type constructors", "paramsub"};
  app.require_subcommand(1);

  std::string file;
  std::string query_text;
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_facts;
  auto saturation_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Shuffle the saturation worklist with this seed");
    cmd->add_option("--max-facts", max_facts, "Override the saturation fuel");
  };

  auto* check_cmd = app.add_subcommand("check", "Parse, normalize and validate a file");
  bool emit_normal = false;
  check_cmd->add_option("file", file)->required();
  check_cmd->add_flag("--emit-normal", emit_normal, "Print the normalized signature");

  auto* rules_cmd = app.add_subcommand("rules", "Print the inferred rule of every constructor pair");
  std::vector<std::string> pair;
  std::string variance = "+";
  bool emit_facts = false;
  rules_cmd->add_option("file", file)->required();
  rules_cmd->add_option("--pair", pair, "Only this pair")->expected(2);
  rules_cmd->add_option("--variance", variance, "+, - or both")->check(CLI::IsMember({"+", "-", "both"}));
  rules_cmd->add_flag("--json", json);
  rules_cmd->add_flag("--emit-facts", emit_facts, "Print the saturated fact database as JSON");
  saturation_flags(rules_cmd);

  auto* facts_cmd = app.add_subcommand("facts", "Print the saturated fact database as JSON");
  bool no_traces = false;
  facts_cmd->add_option("file", file)->required();
  facts_cmd->add_option("--pair", pair, "Only this pair")->expected(2);
  facts_cmd->add_flag("--emit-facts", emit_facts, "Accepted for symmetry with rules");
  facts_cmd->add_flag("--no-traces", no_traces, "Omit refutation traces");
  saturation_flags(facts_cmd);

  auto* query_cmd = app.add_subcommand("query", "Decide a subtyping query");
  bool explain_flag = false;
  query_cmd->add_option("file", file)->required();
  query_cmd->add_option("query", query_text)->required();
  query_cmd->add_flag("--json", json);
  query_cmd->add_flag("--explain", explain_flag, "Print the derivation or the refutation");
  saturation_flags(query_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "Run a bounded reference refuter");
  oracle_cmd->require_subcommand(1);
  std::size_t depth = 8;
  auto oracle_flags = [&](CLI::App* cmd) {
    cmd->add_option("file", file)->required();
    cmd->add_option("query", query_text)->required();
    cmd->add_option("--depth", depth, "Unfolding budget");
    cmd->add_flag("--json", json);
  };
  auto* structural_cmd = oracle_cmd->add_subcommand("structural", "Refute with the structural rules");
  auto* parametric_cmd = oracle_cmd->add_subcommand("parametric", "Refute with the parametric rules");
  oracle_flags(structural_cmd);
  oracle_flags(parametric_cmd);

  auto* bpa_cmd = app.add_subcommand("bpa", "Process algebra encodings");
  bpa_cmd->require_subcommand(1);
  auto* encode_cmd = bpa_cmd->add_subcommand("encode", "Encode a BPA system as type definitions");
  std::string flavor = "record";
  encode_cmd->add_option("file", file)->required();
  encode_cmd->add_option("--flavor", flavor, "record, record-end or variant")
      ->check(CLI::IsMember({"record", "record-end", "variant"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "paramsub: " << e.what() << "\n";
    return kError;
  }

  try {
    if (*check_cmd) {
      auto session = load(file);
      const Signature& sig = session->signature();
      if (emit_normal) out << format_signature(sig);
      std::size_t internal = sig.internal_count();
      out << "ok, " << sig.size() << " definitions";
      if (internal) out << " (" << internal << " internal)";
      out << "\n";
      return kOk;
    }

    if (*rules_cmd || *facts_cmd) {
      auto session = load(file);
      const Signature& sig = session->signature();
      auto keys = selected_pairs(sig, pair);
      FactDatabase db(sig, saturation_options(seed, max_facts));
      for (const auto& k : keys) db.demand(k);
      db.run();
      if (*facts_cmd || emit_facts) {
        out << facts_json(db, !no_traces).dump(2) << "\n";
        return kOk;
      }
      Json listing = Json::array();
      for (const auto& k : keys) {
        if (variance != "both" && variance_text(k.variance) != variance) continue;
        Rule rule = db.rule_of(k);
        if (json) {
          listing.push_back(rule_json(sig, k, rule));
        } else {
          out << rule_line(sig, k, rule) << "\n";
        }
      }
      if (json) out << listing.dump(2) << "\n";
      return kOk;
    }

    if (*query_cmd) {
      auto session = load(file);
      ClosedQuery q = load_query(*session, query_text);
      Checker checker(session->signature(), saturation_options(seed, max_facts));
      Verdict v = checker.check(q.left, q.right, q.variance);
      const Signature& sig = session->signature();
      if (json) {
        out << verdict_json(sig, query_text, v).dump(2) << "\n";
      } else {
        if (v.yes()) {
          out << paint("Yes", "32") << "\n";
        } else {
          out << paint("No", "31") << " (" << to_string(v.refutation().kind) << ")\n";
        }
        if (explain_flag) out << explain(sig, v);
      }
      return v.yes() ? kOk : kNo;
    }

    if (*structural_cmd || *parametric_cmd) {
      auto session = load(file);
      ClosedQuery q = load_query(*session, query_text);
      const Signature& sig = session->signature();
      RefuteOutcome o = *structural_cmd
                            ? bounded_structural_refute(sig, q.left, q.right, q.variance, depth)
                            : bounded_parametric_refute(sig, q.left, {}, q.right, {}, q.variance, depth);
      if (json) {
        out << outcome_json(o).dump(2) << "\n";
      } else {
        out << outcome_text(o) << "\n";
      }
      return o.refuted() ? kNo : kOk;
    }

    if (*encode_cmd) {
      BpaSystem sys;
      try {
        sys = parse_bpa(read_file(file));
      } catch (const Error& e) {
        throw Located{file, e};
      }
      BpaFlavor f = flavor == "record"       ? BpaFlavor::Record
                    : flavor == "record-end" ? BpaFlavor::RecordWithEnd
                                             : BpaFlavor::Variant;
      out << "-- encoded from " << file << "\n" << encode(sys, f);
      return kOk;
    }
  } catch (const Located& e) {
    err << e.where << (e.error.span() ? ":" : ": ") << e.error.describe() << "\n";
    return kError;
  } catch (const Error& e) {
    err << "paramsub: " << e.describe() << "\n";
    return kError;
  }
  err << app.help();
  return kError;
}

}  // namespace paramsub::cli
