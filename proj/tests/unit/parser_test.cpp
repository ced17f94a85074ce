#include <gtest/gtest.h>

#include "generators.hpp"
#include "paramsub/error.hpp"
#include "paramsub/format.hpp"
#include "paramsub/parser.hpp"

using namespace paramsub;
namespace gen = paramsub::testing;

namespace {

ErrorKind kind_of(std::string_view text) {
  try {
    parse_signature(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorKind::Internal;
}

TEST(Parser, EmptyFileHasNoItems) { EXPECT_TRUE(parse_signature("-- nothing\n").items.empty()); }

TEST(Parser, ReadsDefinitionsAndAbbreviations) {
  auto f = parse_signature("type list[a] = +{nil: 1, cons: a * list[a]}\nabbrev pair[a] = a * a\n");
  ASSERT_EQ(f.items.size(), 2u);
  EXPECT_EQ(f.items[0].name, "list");
  EXPECT_EQ(f.items[0].params, (std::vector<std::string>{"a"}));
  EXPECT_EQ(f.items[1].kind, DefinitionKind::Abbreviation);
  EXPECT_NE(f.find("pair"), nullptr);
}

TEST(Parser, ArrowIsRightAssociativeAndBindsLooserThanProduct) {
  auto a = parse_signature("type t = &{f: 1 * 1 -> 1 -> 1}");
  auto b = parse_signature("type t = &{f: (1 * 1) -> (1 -> 1)}");
  EXPECT_EQ(a.items[0].body, b.items[0].body);
}

TEST(Parser, QueryGreaterEqualSwapsSides) {
  auto f = parse_signature("type nat = +{z: 1, s: nat}\ntype one = 1");
  auto q = parse_query("nat >= one", f);
  EXPECT_EQ(q.left, parse_type("one", f));
  EXPECT_EQ(q.right, parse_type("nat", f));
  EXPECT_EQ(q.variance, Variance::Plus);
}

TEST(Parser, ErrorsArePositionedAndClassified) {
  EXPECT_EQ(kind_of("type t = +{a: 1, a: 1}"), ErrorKind::DuplicateLabel);
  EXPECT_EQ(kind_of("type t = 1\ntype t = 1"), ErrorKind::DuplicateDefinition);
  EXPECT_EQ(kind_of("type t = u"), ErrorKind::UnboundIdentifier);
  EXPECT_EQ(kind_of("type t[a] = 1\ntype u = t"), ErrorKind::ArityMismatch);
  EXPECT_EQ(kind_of("type t = +{a 1}"), ErrorKind::Syntax);
  try {
    parse_signature("type t = 1\ntype u = ?");
    FAIL();
  } catch (const Error& e) {
    ASSERT_TRUE(e.span());
    EXPECT_EQ(e.span()->begin.line, 2);
    EXPECT_EQ(e.span()->begin.column, 10);
  }
}

TEST(Parser, QueryRejectsParameters) {
  auto f = parse_signature("type t[a] = +{x: a}");
  EXPECT_THROW(parse_query("t[a] <= t[a]", f), Error);
}

TEST(Parser, PrettyPrintRoundTripsOnCorpus) {
  for (const auto& file : gen::corpus_files()) {
    auto once = format(parse_signature(gen::read_corpus(file)));
    auto twice = format(parse_signature(once));
    EXPECT_EQ(once, twice) << file;
  }
}

TEST(Parser, PrettyPrintRoundTripsOnRandomSignatures) {
  gen::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    auto text = gen::random_signature(rng, {});
    auto once = format(parse_signature(text));
    EXPECT_EQ(once, format(parse_signature(once))) << text;
  }
}

TEST(Parser, FuzzedTokenStreamsNeverCrash) {
  static const char* kTokens[] = {"type", "abbrev", "t", "u", "[", "]", "=", "+{", "&{", "}", ":", ",",
                                  "*",    "->",     "1", "(", ")", "forall", "exists", "x", ".", "a", "?"};
  gen::Rng rng(11);
  std::uniform_int_distribution<std::size_t> tok(0, std::size(kTokens) - 1), len(0, 20);
  int parsed = 0, rejected = 0;
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    for (std::size_t n = len(rng); n > 0; --n) text += std::string(kTokens[tok(rng)]) + " ";
    try {
      parse_signature(text);
      ++parsed;
    } catch (const Error& e) {
      ++rejected;
      EXPECT_NE(e.kind(), ErrorKind::Internal) << text;
    }
  }
  EXPECT_GT(rejected, 0);
  EXPECT_GT(parsed, 0);
}

}  // namespace
