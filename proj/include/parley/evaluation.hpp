#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parley/belief.hpp"

namespace parley {

enum class TriState { reject = 0, unsure = 1, accept = 2 };

std::string_view to_string(TriState t);
TriState parse_tristate(std::string_view text);

enum class EvidenceStatus { accepted, rejected, uncertain };

std::string_view to_string(EvidenceStatus s);

/// Strength of a partner statement from its surface form and the speaker's
/// expertise in the topic.
Strength endorse_statement(SemanticForm form, Expertise expertise);

Strength endorsement_strength(const Endorsement& e);

/// A child belief together with the relation that links it to its parent.
struct EvidenceItem {
    Belief child;
    EvidenceRelation relation;
    EvidenceStatus status = EvidenceStatus::accepted;
    Strength effective = Strength::weak;  // min(child, relation)

    // Tree node that proposed the child; empty for the system's own evidence.
    std::string child_node;
    // Lower-bound support minus attack of each constituent.
    int child_margin = 0;
    int relation_margin = 0;

    bool from_kb() const { return child_node.empty(); }
    bool supports(const Proposition& p) const { return relation.parent == p; }
    bool attacks(const Proposition& p) const { return relation.parent == negate(p); }
};

EvidenceItem make_evidence_item(Belief child, EvidenceRelation relation, EvidenceStatus status);

struct EvaluationConfig {
    int accept_margin = 2;
    int reject_margin = 2;
};

struct Score {
    TriState result = TriState::unsure;
    int support = 0;
    int attack = 0;

    int margin() const { return support - attack; }
};

/// Additive comparison of the evidence for and against p. Items are counted
/// as given; callers decide which uncertain items take part.
Score evaluate(const Proposition& p, std::span<const EvidenceItem> items, std::span<const Belief> base,
               const EvaluationConfig& config = {});

struct EvaluationAnnotation {
    Proposition proposition;
    TriState upper = TriState::unsure;
    TriState lower = TriState::unsure;
    std::vector<Belief> base;
    std::vector<EvidenceItem> evidence;
    std::vector<EvidenceItem> potential;
    // Scores of the lower computation, then of the upper one.
    int support = 0;
    int attack = 0;
    int upper_support = 0;
    int upper_attack = 0;
    // Strongest single contribution on the support side.
    Strength held = Strength::weak;

    int margin() const { return support - attack; }
    TriState status() const { return upper == lower ? upper : TriState::unsure; }
};

/// Splits potential evidence for p into the two extremes: uncertain items in
/// `chosen` are resolved towards `target` and the rest against it. With
/// `chosen` covering everything and target = accept this is the upper bound.
std::vector<EvidenceItem> resolve_items(const Proposition& p, const std::vector<EvidenceItem>& evidence,
                                        const std::vector<EvidenceItem>& potential,
                                        const std::vector<std::size_t>& chosen, TriState target);

struct NodeEvaluation {
    EvaluationAnnotation belief;
    std::optional<EvaluationAnnotation> relation;
};

struct TreeEvaluation {
    std::map<std::string, NodeEvaluation> nodes;

    const NodeEvaluation& at(const std::string& id) const;
};

TreeEvaluation evaluate_tree(const ProposedBeliefTree& tree, const KnowledgeBase& kb,
                             const EvaluationConfig& config = {});

EvaluationAnnotation evaluate_belief(const ProposedBeliefTree& tree, const std::string& node,
                                     const KnowledgeBase& kb, const EvaluationConfig& config = {});

enum class CaseAction {
    accept,
    attempt_accept_children,
    both_2_and_5,
    resolve_bel_itself,
    attempt_reject_children,
    reject,
};

std::string_view to_string(CaseAction a);

struct BoundsCase {
    int number = 0;
    CaseAction action = CaseAction::accept;

    friend bool operator==(const BoundsCase&, const BoundsCase&) = default;
};

// Throws impossible_combination when lower > upper.
BoundsCase classify_combination(TriState upper, TriState lower);

}  // namespace parley
