#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "instances.hpp"
#include "parley/error.hpp"
#include "parley/evaluation.hpp"
#include "parley/scenario.hpp"

using namespace parley;
using parley::testing::reference_evaluate;

namespace {

const Scenario& course() {
    static const Scenario s = load_scenario_file(parley::testing::scenario_path("course-advisement"));
    return s;
}

const ProposedBeliefTree& proposal() { return *course().script.common.front().tree; }

EvidenceItem item(const std::string& child, const std::string& parent, Strength s,
                  EvidenceStatus st = EvidenceStatus::accepted) {
    return make_evidence_item(Belief(parse_proposition(child), {Endorsement::own(s)}),
                              EvidenceRelation(parse_proposition(child), parse_proposition(parent),
                                               {Endorsement::own(Strength::warranted)}),
                              st);
}

}  // namespace

TEST(Endorse, StatementTable) {
    using F = SemanticForm;
    using E = Expertise;
    EXPECT_EQ(endorse_statement(F::tag_question, E::expert), Strength::strong);
    EXPECT_EQ(endorse_statement(F::tag_question, E::novice), Strength::strong);
    for (auto e : {E::novice, E::apprentice, E::expert}) EXPECT_EQ(endorse_statement(F::hedged, e), Strength::weak);
    EXPECT_EQ(endorse_statement(F::direct_assertion, E::novice), Strength::weak);
    EXPECT_EQ(endorse_statement(F::direct_assertion, E::apprentice), Strength::weak);
    EXPECT_EQ(endorse_statement(F::direct_assertion, E::expert), Strength::strong);
    EXPECT_THROW(endorse_statement(F::none, E::expert), Error);
}

TEST(Endorse, OtherSources) {
    EXPECT_EQ(endorsement_strength(Endorsement::stereotype()), Strength::strong);
    EXPECT_EQ(endorsement_strength(Endorsement::own(Strength::warranted)), Strength::warranted);
    EXPECT_EQ(endorsement_strength(Endorsement::derived({Strength::warranted, Strength::weak})), Strength::weak);
}

TEST(EvidenceItem, EffectiveIsWeakerLink) {
    auto i = make_evidence_item(Belief(parse_proposition("A(x)"), {Endorsement::own(Strength::warranted)}),
                                EvidenceRelation(parse_proposition("A(x)"), parse_proposition("B(x)"),
                                                 {Endorsement::own(Strength::strong)}),
                                EvidenceStatus::accepted);
    EXPECT_EQ(i.effective, Strength::strong);
}

TEST(Evaluate, LoneWarrantedBaseAccepts) {
    const auto p = parse_proposition("P(a)");
    std::vector<Belief> base{Belief(p, {Endorsement::own(Strength::warranted)})};
    Score s = evaluate(p, {}, base);
    EXPECT_EQ(s.result, TriState::accept);
    EXPECT_EQ(s.support, 3);
    EXPECT_EQ(s.attack, 0);
}

TEST(Evaluate, NothingIsUnsure) {
    Score s = evaluate(parse_proposition("P(a)"), {}, {});
    EXPECT_EQ(s.result, TriState::unsure);
    EXPECT_EQ(s.support, 0);
    EXPECT_EQ(s.attack, 0);
}

TEST(Evaluate, ThresholdsAreConfigurable) {
    const auto p = parse_proposition("P(a)");
    std::vector<EvidenceItem> items{item("A(x)", "P(a)", Strength::strong)};
    EXPECT_EQ(evaluate(p, items, {}).result, TriState::accept);
    EXPECT_EQ(evaluate(p, items, {}, EvaluationConfig{3, 3}).result, TriState::unsure);
    std::vector<EvidenceItem> against{item("A(x)", "~P(a)", Strength::strong)};
    EXPECT_EQ(evaluate(p, against, {}).result, TriState::reject);
}

TEST(Evaluate, TeachesIsUndecided) {
    const KnowledgeBase kb = course().knowledge_base();
    const auto ann = evaluate_belief(proposal(), "n2", kb);
    EXPECT_EQ(ann.upper, TriState::unsure);
    EXPECT_EQ(ann.lower, TriState::unsure);
    EXPECT_EQ(ann.support, 3);
    EXPECT_EQ(ann.attack, 2);
}

TEST(Evaluate, RootIsAcceptableOnlyIfTeachesIs) {
    const KnowledgeBase kb = course().knowledge_base();
    const auto ev = evaluate_tree(proposal(), kb);
    const auto& root = ev.at("n1").belief;
    EXPECT_EQ(root.upper, TriState::accept);
    EXPECT_EQ(root.lower, TriState::unsure);
    ASSERT_EQ(root.potential.size(), 1u);
    EXPECT_EQ(root.potential[0].child_node, "n2");
    EXPECT_EQ(classify_combination(root.upper, root.lower).number, 2);
    ASSERT_TRUE(ev.at("n2").relation);
    EXPECT_EQ(ev.at("n2").relation->status(), TriState::accept);
}

TEST(Evaluate, RejectedChildIsIgnored) {
    KnowledgeBase kb = course().knowledge_base();
    // The system now flatly rejects the link from teaching to preference.
    kb.add_belief(Belief(negate(parse_proposition("supports(Teaches(Smith,Logic),Better-Than(Logic,Algorithms))")),
                         {Endorsement::own(Strength::warranted)}));
    const auto ev = evaluate_tree(proposal(), kb);
    EXPECT_EQ(ev.at("n2").relation->status(), TriState::reject);
    const auto& root = ev.at("n1").belief;
    for (const auto& i : root.evidence) EXPECT_NE(i.child_node, "n2");
    EXPECT_TRUE(root.potential.empty());
}

TEST(Evaluate, MalformedRequests) {
    const KnowledgeBase kb;
    EXPECT_THROW(evaluate_tree(ProposedBeliefTree{}, kb), Error);
    EXPECT_THROW(evaluate_belief(proposal(), "nope", kb), Error);
}

TEST(Classify, SixRowsAndThreeHoles) {
    using T = TriState;
    EXPECT_EQ(classify_combination(T::accept, T::accept), (BoundsCase{1, CaseAction::accept}));
    EXPECT_EQ(classify_combination(T::accept, T::unsure), (BoundsCase{2, CaseAction::attempt_accept_children}));
    EXPECT_EQ(classify_combination(T::accept, T::reject), (BoundsCase{3, CaseAction::both_2_and_5}));
    EXPECT_EQ(classify_combination(T::unsure, T::unsure), (BoundsCase{4, CaseAction::resolve_bel_itself}));
    EXPECT_EQ(classify_combination(T::unsure, T::reject), (BoundsCase{5, CaseAction::attempt_reject_children}));
    EXPECT_EQ(classify_combination(T::reject, T::reject), (BoundsCase{6, CaseAction::reject}));
    for (auto [u, l] : {std::pair{T::unsure, T::accept}, {T::reject, T::accept}, {T::reject, T::unsure}}) {
        try {
            classify_combination(u, l);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::impossible_combination);
        }
    }
}

TEST(ResolveItems, ChosenGoTowardsTarget) {
    const auto p = parse_proposition("P(a)");
    std::vector<EvidenceItem> pot{item("A(x)", "P(a)", Strength::weak, EvidenceStatus::uncertain),
                                  item("B(x)", "~P(a)", Strength::weak, EvidenceStatus::uncertain)};
    auto upper = resolve_items(p, {}, pot, {0, 1}, TriState::accept);
    ASSERT_EQ(upper.size(), 1u);
    EXPECT_TRUE(upper[0].supports(p));
    auto lower = resolve_items(p, {}, pot, {0, 1}, TriState::reject);
    ASSERT_EQ(lower.size(), 1u);
    EXPECT_TRUE(lower[0].attacks(p));
    // Only the attacker resolved towards acceptance; the supporter falls away.
    EXPECT_TRUE(resolve_items(p, {}, pot, {1}, TriState::accept).empty());
}

// Properties over random trees, checked against the independent reference.
class EvaluationProperty : public ::testing::TestWithParam<int> {};

TEST_P(EvaluationProperty, MatchesReferenceAndBruteForce) {
    for (int i = 0; i < 250; ++i) {
        const std::uint64_t seed = GetParam() * 1000 + i;
        auto inst = parley::testing::random_instance(seed);
        const auto ev = evaluate_tree(inst.tree, inst.kb);
        const auto ref = reference_evaluate(inst.tree, inst.kb);
        for (const auto& n : inst.tree.nodes()) {
            const auto& a = ev.at(n.id).belief;
            const auto& r = ref.beliefs.at(n.id);
            SCOPED_TRACE("seed " + std::to_string(seed) + " node " + n.id);
            ASSERT_LE(a.lower, a.upper);
            const auto c = classify_combination(a.upper, a.lower);
            EXPECT_EQ(c.number == 1, r.all_accept);
            EXPECT_EQ(c.number == 6, r.all_reject);
            EXPECT_EQ(static_cast<int>(a.status()), r.status());
            EXPECT_EQ(a.potential.size(), r.uncertain.size());
            EXPECT_EQ(a.margin(), r.lower_margin);
            EXPECT_EQ(rank(a.held), r.held);
            for (const auto& p : a.potential) EXPECT_EQ(p.status, EvidenceStatus::uncertain);
            if (n.relation) {
                const auto& ra = *ev.at(n.id).relation;
                EXPECT_EQ(static_cast<int>(ra.status()), ref.relations.at(n.id).status());
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, EvaluationProperty, ::testing::Range(0, 8));

TEST(EvaluationProperty, Monotone) {
    std::mt19937_64 rng(7);
    const auto p = parse_proposition("P(a)");
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<EvidenceItem> items;
        const int n = rng() % 6;
        for (int i = 0; i < n; ++i)
            items.push_back(item("C" + std::to_string(i) + "(x)", rng() % 2 ? "P(a)" : "~P(a)",
                                 strength_from_rank(1 + rng() % 3)));
        const TriState before = evaluate(p, items, {}).result;
        auto more = items;
        more.push_back(item("S(x)", "P(a)", strength_from_rank(1 + rng() % 3)));
        EXPECT_GE(evaluate(p, more, {}).result, before);
        more = items;
        more.push_back(item("T(x)", "~P(a)", strength_from_rank(1 + rng() % 3)));
        EXPECT_LE(evaluate(p, more, {}).result, before);
    }
}

TEST(EvaluationProperty, PureAndDeterministic) {
    for (int i = 0; i < 100; ++i) {
        auto inst = parley::testing::random_instance(9000 + i);
        const auto beliefs = inst.kb.beliefs();
        const auto a = to_json(evaluate_tree(inst.tree, inst.kb));
        const auto b = to_json(evaluate_tree(inst.tree, inst.kb));
        EXPECT_EQ(a, b);
        EXPECT_EQ(inst.kb.beliefs(), beliefs);
    }
}
