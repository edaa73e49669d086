#include "parley/evaluation.hpp"

#include <algorithm>
#include <set>

#include "parley/error.hpp"

namespace parley {

std::string_view to_string(TriState t) {
    switch (t) {
        case TriState::reject: return "reject";
        case TriState::unsure: return "unsure";
        case TriState::accept: return "accept";
    }
    return "unsure";
}

TriState parse_tristate(std::string_view t) {
    if (t == "reject") return TriState::reject;
    if (t == "unsure") return TriState::unsure;
    if (t == "accept") return TriState::accept;
    throw Error(ErrorCode::parse_error, "bad tri-state '" + std::string(t) + "'");
}

std::string_view to_string(EvidenceStatus s) {
    switch (s) {
        case EvidenceStatus::accepted: return "accepted";
        case EvidenceStatus::rejected: return "rejected";
        case EvidenceStatus::uncertain: return "uncertain";
    }
    return "uncertain";
}

std::string_view to_string(CaseAction a) {
    switch (a) {
        case CaseAction::accept: return "accept";
        case CaseAction::attempt_accept_children: return "attempt-accept-children";
        case CaseAction::both_2_and_5: return "both-2-and-5";
        case CaseAction::resolve_bel_itself: return "resolve-bel-itself";
        case CaseAction::attempt_reject_children: return "attempt-reject-children";
        case CaseAction::reject: return "reject";
    }
    return "accept";
}

Strength endorse_statement(SemanticForm form, Expertise expertise) {
    switch (form) {
        case SemanticForm::tag_question: return Strength::strong;
        case SemanticForm::hedged: return Strength::weak;
        case SemanticForm::direct_assertion:
            return expertise == Expertise::expert ? Strength::strong : Strength::weak;
        case SemanticForm::none: break;
    }
    throw Error(ErrorCode::validation_error, "partner statement without a semantic form");
}

Strength endorsement_strength(const Endorsement& e) {
    switch (e.source) {
        case Source::own_knowledge:
            if (!e.authored) throw Error(ErrorCode::validation_error, "own-knowledge without authored strength");
            return *e.authored;
        case Source::stereotype: return Strength::strong;
        case Source::partner_statement: return endorse_statement(e.form, e.expertise);
        case Source::derived:
            if (e.premises.empty()) throw Error(ErrorCode::validation_error, "derived endorsement without premises");
            return *std::min_element(e.premises.begin(), e.premises.end());
    }
    return Strength::weak;
}

EvidenceItem make_evidence_item(Belief child, EvidenceRelation relation, EvidenceStatus status) {
    EvidenceItem item;
    item.effective = std::min(child.strength, relation.strength);
    item.child = std::move(child);
    item.relation = std::move(relation);
    item.status = status;
    return item;
}

Score evaluate(const Proposition& p, std::span<const EvidenceItem> items, std::span<const Belief> base,
               const EvaluationConfig& config) {
    const Proposition neg = negate(p);
    Score s;
    for (const auto& item : items) {
        if (item.relation.parent == p)
            s.support += rank(item.effective);
        else if (item.relation.parent == neg)
            s.attack += rank(item.effective);
    }
    for (const auto& b : base) {
        if (b.proposition == p)
            s.support += rank(b.strength);
        else if (b.proposition == neg)
            s.attack += rank(b.strength);
    }
    if (s.support - s.attack >= config.accept_margin)
        s.result = TriState::accept;
    else if (s.attack - s.support >= config.reject_margin)
        s.result = TriState::reject;
    else
        s.result = TriState::unsure;
    return s;
}

std::vector<EvidenceItem> resolve_items(const Proposition& p, const std::vector<EvidenceItem>& evidence,
                                        const std::vector<EvidenceItem>& potential,
                                        const std::vector<std::size_t>& chosen, TriState target) {
    std::vector<EvidenceItem> out = evidence;
    std::vector<bool> in_set(potential.size(), false);
    for (auto i : chosen) in_set.at(i) = true;
    for (std::size_t i = 0; i < potential.size(); ++i) {
        const bool helps_accept = potential[i].supports(p);
        // Accepting a supporting item, or rejecting an attacking one, moves
        // towards acceptance.
        const bool towards_accept = in_set[i] == (target == TriState::accept);
        if (helps_accept == towards_accept) out.push_back(potential[i]);
    }
    return out;
}

const NodeEvaluation& TreeEvaluation::at(const std::string& id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw Error(ErrorCode::malformed_tree, "no evaluation for node '" + id + "'");
    return it->second;
}

namespace {

TriState status_of(const EvaluationAnnotation& a) { return a.status(); }

class TreeEvaluator {
public:
    TreeEvaluator(const ProposedBeliefTree& tree, const KnowledgeBase& kb, const EvaluationConfig& config)
        : tree_(tree), kb_(kb), config_(config) {}

    TreeEvaluation run() {
        visit(tree_.root());
        return std::move(out_);
    }

    const EvaluationAnnotation& visit(const std::string& id) {
        const TreeNode& node = tree_.node(id);
        const Proposition& p = node.belief.proposition;

        std::set<Proposition> child_props;
        for (const auto& c : node.children) child_props.insert(tree_.node(c).belief.proposition);

        EvaluationAnnotation ann = seed(p, node.belief.endorsements, child_props);

        for (const auto& cid : node.children) {
            const TreeNode& child = tree_.node(cid);
            const EvaluationAnnotation& belief_ann = visit(cid);
            const EvaluationAnnotation& rel_ann = out_.at(cid).relation.value();
            const TriState belief_result = status_of(belief_ann);
            const TriState rel_result = status_of(rel_ann);

            EvidenceStatus status;
            if (belief_result == TriState::reject || rel_result == TriState::reject)
                status = EvidenceStatus::rejected;
            else if (belief_result == TriState::accept && rel_result == TriState::accept)
                status = EvidenceStatus::accepted;
            else
                status = EvidenceStatus::uncertain;
            if (status == EvidenceStatus::rejected) continue;

            Belief held_child(child.belief.proposition, {Endorsement::derived({belief_ann.held})}, cid);
            EvidenceRelation held_rel(child.relation->child, child.relation->parent,
                                      {Endorsement::derived({rel_ann.held})});
            EvidenceItem item = make_evidence_item(std::move(held_child), std::move(held_rel), status);
            item.child_node = cid;
            item.child_margin = belief_ann.margin();
            item.relation_margin = rel_ann.margin();
            if (status == EvidenceStatus::accepted)
                ann.evidence.push_back(std::move(item));
            else
                ann.potential.push_back(std::move(item));
        }

        finish(ann);
        auto& slot = out_.nodes[id];
        slot.belief = std::move(ann);
        if (node.relation) {
            const EvidenceRelation& r = *node.relation;
            EvaluationAnnotation rel = seed(r.claim(), r.endorsements, {});
            finish(rel);
            slot.relation = std::move(rel);
        }
        return slot.belief;
    }

private:
    // The user's own statement, the system's belief about p or its negation,
    // and the system's evidential chains into p. Chains starting at a tree
    // child are left to that child's evaluation.
    EvaluationAnnotation seed(const Proposition& p, const std::vector<Endorsement>& partner,
                              const std::set<Proposition>& child_props) const {
        EvaluationAnnotation ann;
        ann.proposition = p;
        const Proposition stated = kb_.conceded(p) ? negate(p) : p;
        ann.base.emplace_back(stated, partner, "partner");
        if (auto own = kb_.lookup(p)) ann.base.push_back(own->belief);

        for (const auto& r : kb_.relations_into(p)) {
            if (child_props.contains(r.child)) continue;
            auto child = kb_.lookup(r.child);
            if (!child || child->negated) continue;
            ann.evidence.push_back(make_evidence_item(child->belief, r, EvidenceStatus::accepted));
            ann.evidence.back().child_margin = rank(child->belief.strength);
            ann.evidence.back().relation_margin = rank(r.strength);
        }
        return ann;
    }

    void finish(EvaluationAnnotation& ann) const {
        const Proposition& p = ann.proposition;
        std::vector<std::size_t> all(ann.potential.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

        const auto upper_items = resolve_items(p, ann.evidence, ann.potential, all, TriState::accept);
        const auto lower_items = resolve_items(p, ann.evidence, ann.potential, all, TriState::reject);
        const Score upper = evaluate(p, upper_items, ann.base, config_);
        const Score lower = evaluate(p, lower_items, ann.base, config_);
        ann.upper = upper.result;
        ann.lower = lower.result;
        ann.upper_support = upper.support;
        ann.upper_attack = upper.attack;
        ann.support = lower.support;
        ann.attack = lower.attack;

        Strength held = Strength::weak;
        for (const auto& b : ann.base)
            if (b.proposition == p) held = std::max(held, b.strength);
        for (const auto& item : ann.evidence)
            if (item.supports(p)) held = std::max(held, item.effective);
        ann.held = held;
    }

    const ProposedBeliefTree& tree_;
    const KnowledgeBase& kb_;
    const EvaluationConfig& config_;
    TreeEvaluation out_;
};

}  // namespace

TreeEvaluation evaluate_tree(const ProposedBeliefTree& tree, const KnowledgeBase& kb, const EvaluationConfig& config) {
    if (tree.root().empty()) throw Error(ErrorCode::malformed_tree, "empty tree");
    return TreeEvaluator(tree, kb, config).run();
}

EvaluationAnnotation evaluate_belief(const ProposedBeliefTree& tree, const std::string& node, const KnowledgeBase& kb,
                                     const EvaluationConfig& config) {
    if (!tree.contains(node)) throw Error(ErrorCode::malformed_tree, "no node '" + node + "'");
    TreeEvaluator ev(tree, kb, config);
    return ev.visit(node);
}

BoundsCase classify_combination(TriState upper, TriState lower) {
    if (lower > upper)
        throw Error(ErrorCode::impossible_combination,
                    "lower " + std::string(to_string(lower)) + " exceeds upper " + std::string(to_string(upper)));
    using T = TriState;
    if (upper == T::accept && lower == T::accept) return {1, CaseAction::accept};
    if (upper == T::accept && lower == T::unsure) return {2, CaseAction::attempt_accept_children};
    if (upper == T::accept && lower == T::reject) return {3, CaseAction::both_2_and_5};
    if (upper == T::unsure && lower == T::unsure) return {4, CaseAction::resolve_bel_itself};
    if (upper == T::unsure && lower == T::reject) return {5, CaseAction::attempt_reject_children};
    return {6, CaseAction::reject};
}

}  // namespace parley
