#include <gtest/gtest.h>

#include "parley/belief.hpp"
#include "parley/error.hpp"
#include "parley/evaluation.hpp"

using namespace parley;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::validation_error;
}

TreeNode node(std::string id, const std::string& claim, std::vector<std::string> children = {},
              std::optional<std::string> parent_claim = std::nullopt) {
    TreeNode n;
    n.id = std::move(id);
    n.belief = Belief(parse_proposition(claim), {Endorsement::partner(SemanticForm::direct_assertion, Expertise::novice)});
    n.children = std::move(children);
    if (parent_claim)
        n.relation = EvidenceRelation(n.belief.proposition, parse_proposition(*parent_claim),
                                      {Endorsement::partner(SemanticForm::direct_assertion, Expertise::novice)});
    return n;
}

}  // namespace

TEST(Proposition, RendersCanonicalText) {
    Proposition p("Teaches", {"Smith", "Logic"});
    EXPECT_EQ(p.str(), "Teaches(Smith,Logic)");
    EXPECT_EQ(negate(p).str(), "~Teaches(Smith,Logic)");
    EXPECT_EQ(negate(negate(p)), p);
    EXPECT_EQ(negate(p).atom(), p);
}

TEST(Proposition, ParsesNestedSupports) {
    const auto p = parse_proposition(" supports( On-Sabbatical(Smith, next-year) , ~Teaches(Smith,Logic) ) ");
    ASSERT_TRUE(p.is_support());
    EXPECT_EQ(p.child().str(), "On-Sabbatical(Smith,next-year)");
    EXPECT_EQ(p.parent().str(), "~Teaches(Smith,Logic)");
    EXPECT_EQ(parse_proposition(p.str()), p);
    EXPECT_EQ(parse_proposition("~" + p.str()), negate(p));
}

TEST(Proposition, DoubleTildeCancels) { EXPECT_EQ(parse_proposition("~~P(a)"), parse_proposition("P(a)")); }

TEST(Proposition, RejectsBadText) {
    EXPECT_EQ(code_of([] { parse_proposition("Teaches(Smith"); }), ErrorCode::parse_error);
    EXPECT_EQ(code_of([] { parse_proposition("supports(P(a))"); }), ErrorCode::parse_error);
    EXPECT_EQ(code_of([] { parse_proposition("P(a) junk"); }), ErrorCode::parse_error);
    EXPECT_EQ(code_of([] { parse_proposition("P(a b)"); }), ErrorCode::parse_error);
    EXPECT_EQ(code_of([] { Proposition("bad name", {}); }), ErrorCode::validation_error);
}

TEST(Strength, RanksAndNames) {
    EXPECT_LT(Strength::weak, Strength::strong);
    EXPECT_LT(Strength::strong, Strength::warranted);
    for (auto s : {Strength::weak, Strength::strong, Strength::warranted})
        EXPECT_EQ(parse_strength(to_string(s)), s);
    EXPECT_EQ(code_of([] { parse_strength("huge"); }), ErrorCode::validation_error);
}

TEST(Endorsement, ValidationRejectsMixedFields) {
    Endorsement e = Endorsement::own(Strength::weak);
    e.form = SemanticForm::hedged;
    EXPECT_EQ(code_of([&] { validate(e); }), ErrorCode::validation_error);
    Endorsement p = Endorsement::partner(SemanticForm::hedged, Expertise::not_applicable);
    EXPECT_EQ(code_of([&] { validate(p); }), ErrorCode::validation_error);
    EXPECT_EQ(code_of([] { validate(Endorsement::derived({})); }), ErrorCode::validation_error);
}

TEST(Belief, StrengthIsStrongestEndorsement) {
    Belief b(parse_proposition("P(a)"),
             {Endorsement::own(Strength::weak), Endorsement::stereotype(),
              Endorsement::partner(SemanticForm::hedged, Expertise::expert)});
    EXPECT_EQ(b.strength, Strength::strong);
    EXPECT_EQ(code_of([] { Belief(parse_proposition("P(a)"), {}); }), ErrorCode::validation_error);
}

TEST(Relation, ChildMustDifferFromParent) {
    const auto p = parse_proposition("P(a)");
    EXPECT_EQ(code_of([&] { EvidenceRelation(p, p, {Endorsement::own(Strength::weak)}); }),
              ErrorCode::validation_error);
}

TEST(Tree, BuildsAndRecomputesParents) {
    auto t = ProposedBeliefTree::build(
        {node("a", "A(x)", {"b", "c"}), node("b", "B(x)", {}, "A(x)"), node("c", "C(x)", {}, "~A(x)")}, "a");
    EXPECT_EQ(t.size(), 3u);
    EXPECT_EQ(t.node("b").parent, "a");
    EXPECT_EQ(t.order("c"), 2u);
}

TEST(Tree, RejectsMalformedShapes) {
    auto bad = [](std::vector<TreeNode> nodes, std::string root) {
        return code_of([&] { ProposedBeliefTree::build(nodes, root); });
    };
    EXPECT_EQ(bad({node("a", "A(x)")}, "z"), ErrorCode::malformed_tree);
    EXPECT_EQ(bad({node("a", "A(x)", {"q"})}, "a"), ErrorCode::malformed_tree);
    EXPECT_EQ(bad({node("a", "A(x)"), node("a", "B(x)", {}, "A(x)")}, "a"), ErrorCode::malformed_tree);
    EXPECT_EQ(bad({node("a", "A(x)", {"b"}), node("b", "B(x)")}, "a"), ErrorCode::malformed_tree);
    EXPECT_EQ(bad({node("a", "A(x)", {"b"}), node("b", "B(x)", {}, "C(x)")}, "a"), ErrorCode::malformed_tree);
    EXPECT_EQ(bad({node("a", "A(x)", {}, "B(x)")}, "a"), ErrorCode::malformed_tree);
    EXPECT_EQ(bad({node("a", "A(x)", {"b"}), node("b", "B(x)", {"a"}, "A(x)")}, "a"), ErrorCode::malformed_tree);
    EXPECT_EQ(bad({node("a", "A(x)"), node("b", "B(x)", {}, "A(x)")}, "a"), ErrorCode::malformed_tree);
}

TEST(Tree, GraftMergesMatchingRoot) {
    auto t = ProposedBeliefTree::build({node("a", "A(x)", {"b"}), node("b", "B(x)", {}, "A(x)")}, "a");
    auto sub = ProposedBeliefTree::build({node("r", "B(x)", {"c"}), node("c", "C(x)", {}, "B(x)")}, "r");
    auto g = t.graft("b", sub, "s1-");
    ASSERT_TRUE(g.contains("s1-c"));
    EXPECT_FALSE(g.contains("s1-r"));
    EXPECT_EQ(g.node("s1-c").parent, "b");
}

TEST(Tree, GraftLinksForeignRoot) {
    auto t = ProposedBeliefTree::build({node("a", "A(x)")}, "a");
    auto sub = ProposedBeliefTree::build({node("r", "D(x)")}, "r");
    auto g = t.graft("a", sub, "s-");
    ASSERT_TRUE(g.node("s-r").relation);
    EXPECT_EQ(g.node("s-r").relation->parent.str(), "A(x)");
}

TEST(Tree, CanonicalIgnoresIdsAndChildOrder) {
    auto t1 = ProposedBeliefTree::build(
        {node("a", "A(x)", {"b", "c"}), node("b", "B(x)", {}, "A(x)"), node("c", "C(x)", {}, "A(x)")}, "a");
    auto t2 = ProposedBeliefTree::build(
        {node("z", "A(x)", {"y", "w"}), node("w", "B(x)", {}, "A(x)"), node("y", "C(x)", {}, "A(x)")}, "z");
    auto t3 = ProposedBeliefTree::build(
        {node("a", "A(x)", {"b", "c"}), node("b", "B(x)", {}, "A(x)"), node("c", "C(x)", {}, "~A(x)")}, "a");
    EXPECT_EQ(t1.canonical(), t2.canonical());
    EXPECT_NE(t1.canonical(), t3.canonical());
}

TEST(KnowledgeBase, LookupFindsEitherPolarity) {
    KnowledgeBase kb;
    const auto p = parse_proposition("On-Sabbatical(Smith,next-year)");
    kb.add_belief(Belief(negate(p), {Endorsement::own(Strength::strong)}));
    auto l = kb.lookup(p);
    ASSERT_TRUE(l);
    EXPECT_TRUE(l->negated);
    EXPECT_TRUE(kb.believes(negate(p)));
    EXPECT_FALSE(kb.believes(p));
    // A new view replaces the old one.
    kb.add_belief(Belief(p, {Endorsement::own(Strength::weak)}));
    EXPECT_TRUE(kb.believes(p));
    EXPECT_FALSE(kb.retract(negate(p)));
    EXPECT_TRUE(kb.retract(p));
    EXPECT_FALSE(kb.lookup(p));
}

TEST(KnowledgeBase, RelationsIntoEitherPolarity) {
    KnowledgeBase kb;
    const auto t = parse_proposition("T(x)");
    kb.add_relation(EvidenceRelation(parse_proposition("A(x)"), t, {Endorsement::own(Strength::weak)}));
    kb.add_relation(EvidenceRelation(parse_proposition("B(x)"), negate(t), {Endorsement::own(Strength::strong)}));
    kb.add_belief(Belief(negate(Proposition::supports(parse_proposition("C(x)"), t)), {Endorsement::own(Strength::weak)}));
    EXPECT_EQ(kb.relations_into(t).size(), 2u);
    EXPECT_EQ(kb.relations_into(negate(t)).size(), 2u);
    EXPECT_EQ(kb.relations().size(), 2u);
}

TEST(KnowledgeBase, ConcessionAndMutualFlip) {
    KnowledgeBase kb;
    const auto p = parse_proposition("P(a)");
    kb.concede(p);
    EXPECT_TRUE(kb.conceded(p));
    kb.concede(negate(p));
    EXPECT_FALSE(kb.conceded(p));
    EXPECT_TRUE(kb.conceded(negate(p)));
    kb.add_mutual(p);
    kb.add_mutual(negate(p));
    EXPECT_FALSE(kb.mutual(p));
    EXPECT_TRUE(kb.mutual(negate(p)));
    EXPECT_EQ(kb.mutual_beliefs().size(), 1u);
}

TEST(KnowledgeBase, PartnerSupportAccumulates) {
    KnowledgeBase kb;
    const auto p = parse_proposition("P(a)");
    EXPECT_FALSE(kb.partner_support(p));
    kb.record_partner_support(p, {});
    ASSERT_TRUE(kb.partner_support(p));
    EXPECT_TRUE(kb.partner_support(p)->empty());
    kb.record_partner_support(p, {parse_proposition("Q(a)")});
    EXPECT_EQ(kb.partner_support(p)->size(), 1u);
}

TEST(KnowledgeBase, ExpertiseByTopic) {
    KnowledgeBase kb;
    kb.set_topic("Teaches", "course-scheduling");
    kb.set_expertise("course-scheduling", Expertise::expert);
    EXPECT_EQ(kb.expertise_for(parse_proposition("Teaches(Smith,Logic)")), Expertise::expert);
    EXPECT_EQ(kb.expertise_for(parse_proposition("Other(x)")), kb.expertise(""));
}
