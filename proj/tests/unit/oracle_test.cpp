#include <gtest/gtest.h>

#include "generators.hpp"
#include "paramsub/error.hpp"
#include "paramsub/oracle.hpp"
#include "paramsub/query.hpp"
#include "paramsub/session.hpp"

using namespace paramsub;
namespace gen = paramsub::testing;

namespace {

constexpr auto P = Variance::Plus;

TEST(Oracle, NatBelowEvenFailsAfterTwoUnfoldings) {
  Session s(gen::read_corpus("nat.poly"));
  auto q = s.query("nat <= even");
  EXPECT_FALSE(bounded_structural_refute(s.signature(), q.left, q.right, P, 1).refuted());
  auto o = bounded_structural_refute(s.signature(), q.left, q.right, P, 2);
  ASSERT_TRUE(o.refuted());
  EXPECT_EQ(o.violation().depth, 2u);
  EXPECT_EQ(o.violation().rule, TraceRule::VariantLabels);
  EXPECT_EQ(to_string(o.violation().path), "unfold .s unfold");
}

TEST(Oracle, MonotoneInDepth) {
  Session s(gen::read_corpus("cfl.poly"));
  auto q = s.query("d0 <= e0");
  auto first = bounded_structural_refute(s.signature(), q.left, q.right, P, 3);
  ASSERT_TRUE(first.refuted());
  for (std::size_t k = 4; k <= 10; ++k) {
    auto o = bounded_structural_refute(s.signature(), q.left, q.right, P, k);
    ASSERT_TRUE(o.refuted());
    EXPECT_EQ(o.violation().path, first.violation().path);
  }
  EXPECT_FALSE(bounded_structural_refute(s.signature(), q.left, q.right, P, 2).refuted());
}

TEST(Oracle, SnatIsStructurallyButNotParametricallyAbove) {
  Session s(gen::read_corpus("snat.poly"));
  auto q = s.query("nat <= snat[one]");
  EXPECT_FALSE(bounded_structural_refute(s.signature(), q.left, q.right, P, 20).refuted());
  auto o = bounded_parametric_refute(s.signature(), q.left, {}, q.right, {}, P, 3);
  ASSERT_TRUE(o.refuted());
  EXPECT_TRUE(is_parametricity_rule(o.violation().rule));
}

TEST(Oracle, ParametricSearchAcceptsBalancedWords) {
  Session s(gen::read_corpus("cfl.poly"));
  auto q = s.query("e0 <= d0");
  EXPECT_FALSE(bounded_parametric_refute(s.signature(), q.left, {}, q.right, {}, P, 6).refuted());
  EXPECT_FALSE(bounded_structural_refute(s.signature(), q.left, q.right, P, 6).refuted());
}

TEST(Oracle, MonoDecide) {
  Session s(gen::read_corpus("nat.poly"));
  const auto& sig = s.signature();
  EXPECT_FALSE(mono_decide(sig, sig.require("nat"), sig.require("even")));
  EXPECT_TRUE(mono_decide(sig, sig.require("even"), sig.require("nat")));
  for (ConstructorId t = 0; t < sig.size(); ++t) EXPECT_TRUE(mono_decide(sig, t, t));
}

TEST(Oracle, MonoDecideRejectsPolymorphism) {
  Session s(gen::read_corpus("lists.poly"));
  try {
    mono_decide(s.signature(), 0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMonomorphic);
  }
}

TEST(Oracle, MonoDecideReadsArrowDomainsContravariantly) {
  Session s("type a = +{x: 1}\ntype b = +{x: 1, y: 1}\ntype f = &{g: a -> a}\ntype h = &{g: b -> a}");
  const auto& sig = s.signature();
  EXPECT_TRUE(mono_decide(sig, sig.require("h"), sig.require("f")));
  EXPECT_FALSE(mono_decide(sig, sig.require("f"), sig.require("h")));
}

TEST(Oracle, ReplayFollowsAViolationPath) {
  Session s(gen::read_corpus("nat.poly"));
  auto q = s.query("nat <= even");
  auto o = bounded_structural_refute(s.signature(), q.left, q.right, P, 4);
  ASSERT_TRUE(o.refuted());
  EXPECT_EQ(replay_structural(s.signature(), q.left, q.right, P, o.violation().path), TraceRule::VariantLabels);
  std::vector<PathStep> short_path{PathStep{PathStep::Kind::Unfold, {}}};
  EXPECT_FALSE(replay_structural(s.signature(), q.left, q.right, P, short_path));
  std::vector<PathStep> bogus{PathStep{PathStep::Kind::Domain, {}}};
  EXPECT_FALSE(replay_structural(s.signature(), q.left, q.right, P, bogus));
}

TEST(Oracle, EngineYesIsNeverStructurallyRefuted) {
  gen::Rng rng(17);
  for (int i = 0; i < 60; ++i) {
    auto text = gen::random_signature(rng, {});
    Session s(text);
    Checker checker(s.signature());
    for (int j = 0; j < 4; ++j) {
      auto q = s.query(gen::random_closed_type(rng, text) + " <= " + gen::random_closed_type(rng, text));
      if (!checker.check(q.left, q.right, q.variance).yes()) continue;
      for (std::size_t k : {2u, 6u, 10u}) {
        EXPECT_FALSE(bounded_structural_refute(s.signature(), q.left, q.right, q.variance, k).refuted()) << text;
      }
    }
  }
}

}  // namespace
