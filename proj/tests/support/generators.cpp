#include "generators.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "paramsub/parser.hpp"

#ifndef PARAMSUB_CORPUS_DIR
#error "PARAMSUB_CORPUS_DIR must point at the corpus"
#endif

namespace paramsub::testing {

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

class BodyGen {
 public:
  BodyGen(Rng& rng, const SignatureShape& shape, const std::vector<std::size_t>& arities)
      : rng_(rng), shape_(shape), arities_(arities) {}

  std::string body(std::size_t params) {
    params_ = params;
    binders_.clear();
    return structural(shape_.max_depth);
  }

 private:
  std::string leaf(std::size_t depth) {
    std::vector<int> options{0, 1};
    if (params_) options.push_back(2);
    if (!binders_.empty()) options.push_back(3);
    switch (options[pick(rng_, options.size())]) {
      case 0:
        return "1";
      case 2:
        return "a" + std::to_string(pick(rng_, params_));
      case 3:
        return binders_[pick(rng_, binders_.size())];
      default:
        break;
    }
    std::size_t c = pick(rng_, arities_.size());
    std::string out = "c" + std::to_string(c);
    if (arities_[c]) {
      out += "[";
      for (std::size_t i = 0; i < arities_[c]; ++i) {
        if (i) out += ", ";
        out += depth > 1 && coin(rng_, 0.3) ? any(depth - 1) : leaf(0);
      }
      out += "]";
    }
    return out;
  }

  std::string any(std::size_t depth) {
    if (depth == 0 || coin(rng_, 0.5)) return leaf(depth);
    return structural(depth);
  }

  std::string fields(std::string_view open, std::size_t depth) {
    static const char* kLabels[] = {"a", "b", "c", "d"};
    std::vector<std::string> chosen;
    for (std::size_t i = 0; i < std::min<std::size_t>(shape_.max_labels, 4); ++i) {
      if (coin(rng_, 0.6)) chosen.push_back(kLabels[i]);
    }
    std::string out(open);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if (i) out += ", ";
      out += chosen[i] + ": " + any(depth - 1);
    }
    return out + "}";
  }

  std::string structural(std::size_t depth) {
    std::size_t kinds = shape_.quantifiers ? 7 : 5;
    switch (pick(rng_, kinds)) {
      case 0:
        return "1";
      case 1:
        return fields("+{", depth);
      case 2:
        return fields("&{", depth);
      case 3:
        return "(" + any(depth - 1) + " * " + any(depth - 1) + ")";
      case 4:
        return "(" + any(depth - 1) + " -> " + any(depth - 1) + ")";
      default: {
        std::string x = "x" + std::to_string(binders_.size());
        binders_.push_back(x);
        std::string out = std::string(coin(rng_, 0.5) ? "forall " : "exists ") + x + ". " + any(depth - 1);
        binders_.pop_back();
        return "(" + out + ")";
      }
    }
  }

  Rng& rng_;
  const SignatureShape& shape_;
  const std::vector<std::size_t>& arities_;
  std::size_t params_ = 0;
  std::vector<std::string> binders_;
};

}  // namespace

std::string random_signature(Rng& rng, const SignatureShape& shape) {
  std::size_t n = 1 + pick(rng, shape.max_constructors);
  std::vector<std::size_t> arities(n);
  for (auto& a : arities) a = pick(rng, shape.max_params + 1);
  BodyGen gen(rng, shape, arities);
  std::string out;
  for (std::size_t c = 0; c < n; ++c) {
    out += "type c" + std::to_string(c);
    if (arities[c]) {
      out += "[";
      for (std::size_t i = 0; i < arities[c]; ++i) out += (i ? ", a" : "a") + std::to_string(i);
      out += "]";
    }
    out += " = " + gen.body(arities[c]) + "\n";
  }
  return out;
}

std::string random_closed_type(Rng& rng, const std::string& text, std::size_t max_depth) {
  SourceFile file = parse_signature(text);
  std::vector<std::pair<std::string, std::size_t>> ctors;
  for (const auto& d : file.items) ctors.emplace_back(d.name, d.params.size());
  auto gen = [&](auto& self, std::size_t depth) -> std::string {
    std::vector<std::size_t> allowed;
    for (std::size_t i = 0; i < ctors.size(); ++i) {
      if (depth > 0 || ctors[i].second == 0) allowed.push_back(i);
    }
    if (allowed.empty()) return "1";
    const auto& [name, arity] = ctors[allowed[pick(rng, allowed.size())]];
    std::string out = name;
    if (arity) {
      out += "[";
      for (std::size_t i = 0; i < arity; ++i) {
        if (i) out += ", ";
        out += coin(rng, 0.15) ? "1" : self(self, depth - 1);
      }
      out += "]";
    }
    return out;
  };
  return gen(gen, max_depth);
}

BpaSystem random_bpa(Rng& rng, std::size_t max_vars, std::size_t max_word) {
  static const char* kActions[] = {"a", "b", "c"};
  BpaSystem sys;
  std::size_t n = 1 + pick(rng, max_vars);
  for (std::size_t v = 0; v < n; ++v) sys.equations.push_back(BpaEquation{std::string(1, static_cast<char>('X' + v)), {}});
  for (auto& eq : sys.equations) {
    for (const char* a : kActions) {
      if (!coin(rng, 0.55)) continue;
      BpaWord w;
      std::size_t len = pick(rng, max_word + 1);
      for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<std::uint32_t>(pick(rng, n)));
      eq.terms.push_back(BpaTerm{a, std::move(w)});
    }
    if (eq.terms.empty()) eq.terms.push_back(BpaTerm{kActions[pick(rng, 3)], {}});
  }
  return sys;
}

BpaWord random_word(Rng& rng, const BpaSystem& sys, std::size_t max_len) {
  BpaWord w;
  std::size_t len = pick(rng, max_len + 1);
  for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<std::uint32_t>(pick(rng, sys.equations.size())));
  return w;
}

std::string corpus_dir() { return PARAMSUB_CORPUS_DIR; }

std::string read_corpus(const std::string& name) {
  std::ifstream in(corpus_dir() + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir())) {
    if (e.path().extension() == ".poly") out.push_back(e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace paramsub::testing
