#include <gtest/gtest.h>

#include "paramsub/error.hpp"
#include "paramsub/syntax.hpp"

using namespace paramsub;

namespace {

constexpr auto P = Variance::Plus;
constexpr auto M = Variance::Minus;

TEST(Variance, NegateIsAnInvolution) {
  EXPECT_EQ(negate(P), M);
  EXPECT_EQ(negate(M), P);
  EXPECT_EQ(negate(negate(M)), M);
  EXPECT_EQ(to_string(P), "+");
  EXPECT_EQ(to_string(M), "-");
}

TEST(Labels, SubsetFollowsVariance) {
  LabelSet small{"a"}, big{"a", "b"};
  EXPECT_TRUE(label_subset(small, big, P));
  EXPECT_FALSE(label_subset(big, small, P));
  EXPECT_TRUE(label_subset(big, small, M));
  EXPECT_FALSE(label_subset(small, big, M));
  EXPECT_TRUE(label_subset({}, {}, P));
}

TEST(Fields, SortedAndUnique) {
  auto fs = make_fields({{"b", NamedType::param(0)}, {"a", NamedType::param(1)}});
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0].label, "a");
  EXPECT_EQ(labels_of(fs), (LabelSet{"a", "b"}));
  EXPECT_NE(find_field(fs, "b"), nullptr);
  EXPECT_EQ(find_field(fs, "c"), nullptr);
  EXPECT_THROW(make_fields({{"a", NamedType::param(0)}, {"a", NamedType::param(0)}}), Error);
}

TEST(NamedType, SubstituteReplacesParameters) {
  auto t = NamedType::inst(3, {NamedType::param(1), NamedType::param(0)});
  auto s = substitute(t, {NamedType::inst(0), NamedType::inst(1)});
  EXPECT_EQ(s, NamedType::inst(3, {NamedType::inst(1), NamedType::inst(0)}));
  EXPECT_FALSE(has_params(s));
  EXPECT_TRUE(has_params(t));
}

TEST(NamedType, OpenReplacesTheInnermostBinder) {
  auto t = NamedType::inst(2, {NamedType::bound(0), NamedType::bound(1)});
  auto o = open(t, NamedType::free(7));
  EXPECT_EQ(o.args()[0], NamedType::free(7));
  EXPECT_TRUE(has_bound_vars(o));
  EXPECT_FALSE(has_bound_vars(open(NamedType::bound(0), NamedType::free(1))));
}

TEST(NamedType, StructuralEqualityAndHash) {
  auto a = NamedType::inst(1, {NamedType::inst(0)});
  auto b = NamedType::inst(1, {NamedType::inst(0)});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a, NamedType::inst(1, {NamedType::inst(2)}));
  EXPECT_NE(NamedType::param(0), NamedType::free(0));
}

TEST(StructuralType, QuantifierBindersAreIgnored) {
  StructuralType a = Forall{"x", NamedType::bound(0)};
  StructuralType b = Forall{"y", NamedType::bound(0)};
  EXPECT_TRUE(a == b);
  EXPECT_EQ(hash_value(a), hash_value(b));
  StructuralType c = Exists{"x", NamedType::bound(0)};
  EXPECT_FALSE(a == c);
  EXPECT_EQ(head_symbol(c), "∃");
}

TEST(Atoms, PlusSortsBeforeMinus) {
  Atom plus{1, P, 1}, minus{0, M, 0};
  EXPECT_LT(plus, minus);
  EXPECT_LT((Atom{0, P, 1}), (Atom{1, P, 0}));
}

TEST(ConstraintSet, AddAtomReportsChange) {
  ConstraintSet c;
  EXPECT_TRUE(c.is_top());
  auto [c1, changed] = add_atom(c, Atom{0, P, 0});
  EXPECT_TRUE(changed);
  auto [c2, again] = add_atom(c1, Atom{0, P, 0});
  EXPECT_FALSE(again);
  EXPECT_EQ(c1, c2);
  auto bottom = ConstraintSet::bottom(RefutationTrace{});
  auto [b2, b_changed] = add_atom(bottom, Atom{0, M, 0});
  EXPECT_TRUE(b2.is_bottom());
  EXPECT_FALSE(b_changed);
  EXPECT_TRUE(b2.atoms().empty());
}

TEST(SubstitutionStack, PushPopIsPersistent) {
  SubstitutionStack empty;
  auto one = empty.push({NamedType::inst(0)});
  auto two = one.push({NamedType::inst(1)});
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(two.depth(), 2u);
  EXPECT_EQ(two.top()[0], NamedType::inst(1));
  EXPECT_EQ(two.pop(), one);
  EXPECT_EQ(one.depth(), 1u);
  EXPECT_NE(one, two);
  EXPECT_EQ(two.pop().hash(), one.hash());
}

TEST(Signature, LookupAndDuplicates) {
  Signature sig;
  auto id = sig.add(Definition{"nat", {}, Unit{}, Origin::User});
  EXPECT_EQ(sig.require("nat"), id);
  EXPECT_FALSE(sig.find("bool"));
  EXPECT_THROW(sig.require("bool"), Error);
  EXPECT_THROW(sig.add(Definition{"nat", {}, Unit{}, Origin::User}), Error);
}

TEST(Rules, ParametricityRules) {
  EXPECT_TRUE(is_parametricity_rule(TraceRule::ParamLeft));
  EXPECT_TRUE(is_parametricity_rule(TraceRule::VarRight));
  EXPECT_FALSE(is_parametricity_rule(TraceRule::Mismatch));
  EXPECT_FALSE(is_parametricity_rule(TraceRule::Shape));
  EXPECT_EQ(rule_id(TraceRule::VariantLabels), "variant-labels");
}

}  // namespace
