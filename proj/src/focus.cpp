#include "parley/focus.hpp"

#include <algorithm>
#include <optional>

#include "parley/error.hpp"

namespace parley {

int closeness(const EvidenceItem& item, Direction direction) {
    if (direction == Direction::to_accept) return std::min(item.child_margin, item.relation_margin);
    return std::min(-item.child_margin, -item.relation_margin);
}

std::string_view to_string(FocusRationale r) {
    switch (r) {
        case FocusRationale::self_focus: return "self-focus";
        case FocusRationale::accept_path: return "accept-path";
        case FocusRationale::reject_path: return "reject-path";
    }
    return "self-focus";
}

namespace {

// Closeness of an item to being resolved in the direction that helps `target`
// for its parent: an attacking item helps acceptance by being rejected.
int closeness_toward(const EvidenceItem& item, const Proposition& parent, TriState target) {
    const bool want_accepted = item.supports(parent) == (target == TriState::accept);
    return closeness(item, want_accepted ? Direction::to_accept : Direction::to_reject);
}

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

class FocusSelector {
public:
    FocusSelector(const ProposedBeliefTree& tree, const TreeEvaluation& evaluation, const EvaluationConfig& config)
        : tree_(tree), eval_(evaluation), config_(config) {}

    FocusSet top(const std::string& id) {
        const EvaluationAnnotation& ann = eval_.at(id).belief;
        if (ann.status() != TriState::unsure)
            throw Error(ErrorCode::not_unsure, ann.proposition.str() + " is already " +
                                                   std::string(to_string(ann.status())));
        FocusSet out;
        select(id, out, true);
        return out;
    }

private:
    std::vector<FocusMember> select(const std::string& id, FocusSet& record, bool is_top) {
        const TreeNode& node = tree_.node(id);
        const EvaluationAnnotation& ann = eval_.at(id).belief;
        std::vector<FocusMember> self{FocusMember{id, false, ann.proposition}};

        if (ann.status() != TriState::unsure) return {};
        if (node.children.empty() || (ann.upper == TriState::unsure && ann.lower == TriState::unsure)) {
            if (is_top) record.rationale = FocusRationale::self_focus;
            return self;
        }

        std::vector<FocusMember> members;
        bool found = false;
        if (ann.upper == TriState::accept) {
            if (auto chosen = search(ann, TriState::accept, is_top ? &record : nullptr)) {
                found = true;
                if (is_top) {
                    record.accept_set = *chosen;
                    record.rationale = FocusRationale::accept_path;
                }
                append(members, expand(ann, *chosen, TriState::accept, record));
            }
        }
        if (ann.lower == TriState::reject) {
            if (auto chosen = search(ann, TriState::reject, is_top ? &record : nullptr)) {
                if (is_top) {
                    record.reject_set = *chosen;
                    if (!found) record.rationale = FocusRationale::reject_path;
                }
                found = true;
                append(members, expand(ann, *chosen, TriState::reject, record));
            }
        }
        if (!found || members.empty()) {
            if (is_top) {
                record.fallback = true;
                record.rationale = FocusRationale::self_focus;
            }
            return self;
        }
        if (is_top) record.members = members;
        return members;
    }

    // Smallest, then closest, set of uncertain items whose resolution towards
    // `target` decides the node that way.
    std::optional<std::vector<std::size_t>> search(const EvaluationAnnotation& ann, TriState target,
                                                   FocusSet* record) const {
        const Proposition& p = ann.proposition;
        const std::size_t n = ann.potential.size();
        for (std::size_t k = 1; k <= n; ++k) {
            struct Ranked {
                std::vector<std::size_t> items;
                int score;
            };
            std::vector<Ranked> ranked;
            for (auto& s : subsets_of_size(n, k)) {
                int score = 0;
                for (auto i : s) score += closeness_toward(ann.potential[i], p, target);
                ranked.push_back({std::move(s), score});
            }
            std::stable_sort(ranked.begin(), ranked.end(),
                             [](const Ranked& a, const Ranked& b) { return a.score > b.score; });
            for (const auto& r : ranked) {
                auto items = resolve_items(p, ann.evidence, ann.potential, r.items, target);
                const TriState result = evaluate(p, items, ann.base, config_).result;
                if (record) {
                    record->candidates.push_back(FocusCandidate{
                        target == TriState::accept ? Direction::to_accept : Direction::to_reject, r.items, r.score,
                        result});
                }
                if (result == target) return r.items;
            }
        }
        return std::nullopt;
    }

    std::vector<FocusMember> expand(const EvaluationAnnotation& ann, std::vector<std::size_t> chosen, TriState target,
                                    FocusSet& record) {
        std::stable_sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
            return closeness_toward(ann.potential[a], ann.proposition, target) >
                   closeness_toward(ann.potential[b], ann.proposition, target);
        });
        std::vector<FocusMember> out;
        for (auto i : chosen) {
            const EvidenceItem& item = ann.potential[i];
            append(out, select(item.child_node, record, false));
            const auto& rel = eval_.at(item.child_node).relation;
            if (rel && rel->status() == TriState::unsure)
                append(out, {FocusMember{item.child_node, true, item.relation.claim()}});
        }
        return out;
    }

    static void append(std::vector<FocusMember>& into, const std::vector<FocusMember>& more) {
        for (const auto& m : more)
            if (std::find(into.begin(), into.end(), m) == into.end()) into.push_back(m);
    }

    const ProposedBeliefTree& tree_;
    const TreeEvaluation& eval_;
    const EvaluationConfig& config_;
};

}  // namespace

FocusSet select_focus(const ProposedBeliefTree& tree, const TreeEvaluation& evaluation, const std::string& node,
                      const EvaluationConfig& config) {
    FocusSelector selector(tree, evaluation, config);
    FocusSet out = selector.top(node);
    if (out.members.empty()) {
        const auto& ann = evaluation.at(node).belief;
        out.members.push_back(FocusMember{node, false, ann.proposition});
    }
    return out;
}

}  // namespace parley
