#include <gtest/gtest.h>

#include "generators.hpp"
#include "paramsub/bpa.hpp"
#include "paramsub/error.hpp"
#include "paramsub/query.hpp"
#include "paramsub/session.hpp"

using namespace paramsub;
namespace gen = paramsub::testing;

namespace {

const char* kXY = "X = a.eps + b.eps\nY = a.eps\n";

ErrorKind kind_of(std::string_view text) {
  try {
    parse_bpa(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << text;
  return ErrorKind::Internal;
}

TEST(Bpa, ParseAndFormat) {
  auto sys = parse_bpa("-- demo\nX = a.X.Y + b\nY = c.eps\n");
  ASSERT_EQ(sys.equations.size(), 2u);
  EXPECT_EQ(sys.equations[0].terms[0].next, (BpaWord{0, 1}));
  EXPECT_TRUE(sys.equations[0].terms[1].next.empty());
  EXPECT_EQ(format_bpa(parse_bpa(format_bpa(sys))), format_bpa(sys));
  EXPECT_EQ(parse_word(sys, "Y.X"), (BpaWord{1, 0}));
  EXPECT_EQ(format_word(sys, {}), "eps");
}

TEST(Bpa, InvalidSystems) {
  EXPECT_EQ(kind_of("X = a.Z"), ErrorKind::InvalidSystem);
  EXPECT_EQ(kind_of("X = a + a.X"), ErrorKind::InvalidSystem);
  EXPECT_EQ(kind_of("X = a\nX = b"), ErrorKind::InvalidSystem);
  EXPECT_EQ(kind_of("X = "), ErrorKind::Syntax);
}

TEST(Bpa, EncodesOneRecordPerVariable) {
  auto sys = parse_bpa("X = a.eps");
  EXPECT_NE(encode(sys, BpaFlavor::Record).find("type tX[al] = &{a: al}"), std::string::npos);
  EXPECT_NE(encode(sys, BpaFlavor::Variant).find("type tX[al] = +{a: al}"), std::string::npos);
  auto with_end = encode(sys, BpaFlavor::RecordWithEnd);
  EXPECT_NE(with_end.find("type t0 = &{end$: t0}"), std::string::npos);
  EXPECT_NE(with_end.find("type tX[al] = &{a: al, end$: t0}"), std::string::npos);
}

TEST(Bpa, TranslateNestsApplications) {
  auto sys = parse_bpa(kXY);
  EXPECT_EQ(translate(sys, {0, 1}), "tX[tY[t]]");
  EXPECT_EQ(translate(sys, {}), "t");
}

TEST(Bpa, Transitions) {
  auto sys = parse_bpa("X = a.X.Y + b\nY = c\n");
  auto ts = transitions(sys, {0, 1});
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(ts[0].first, "a");
  EXPECT_EQ(ts[0].second, (BpaWord{0, 1, 1}));
  EXPECT_EQ(ts[1].second, (BpaWord{1}));
  EXPECT_TRUE(transitions(sys, {}).empty());
}

TEST(Bpa, SimulationExamples) {
  auto sys = parse_bpa(kXY);
  for (std::size_t k = 0; k <= 6; ++k) EXPECT_FALSE(bounded_simulation_refute(sys, {1}, {0}, k).refuted());
  EXPECT_FALSE(bounded_simulation_refute(sys, {0}, {1}, 0).refuted());
  auto o = bounded_simulation_refute(sys, {0}, {1}, 1);
  ASSERT_TRUE(o.refuted());
  EXPECT_EQ(o.violation().actions, (std::vector<Label>{"b"}));
}

TEST(Bpa, EmptyWordIsSimulatedByEverything) {
  gen::Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    auto sys = gen::random_bpa(rng);
    EXPECT_FALSE(bounded_simulation_refute(sys, {}, gen::random_word(rng, sys), 6).refuted());
  }
}

TEST(Bpa, EncodedQueryAgreesWithSimulation) {
  auto sys = parse_bpa(kXY);
  for (auto flavor : {BpaFlavor::Record, BpaFlavor::RecordWithEnd, BpaFlavor::Variant}) {
    Session s(encode(sys, flavor));
    Checker c(s.signature());
    auto yes = s.query(simulation_query(sys, {1}, {0}, flavor));
    EXPECT_TRUE(c.check(yes.left, yes.right, yes.variance).yes());
    auto no = s.query(simulation_query(sys, {0}, {1}, flavor));
    EXPECT_FALSE(c.check(no.left, no.right, no.variance).yes());
  }
}

}  // namespace
