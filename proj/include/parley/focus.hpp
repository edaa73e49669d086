#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "parley/evaluation.hpp"

namespace parley {

enum class Direction { to_accept, to_reject };

/// How close an uncertain item was to being accepted (or rejected): the
/// weaker of its two constituents' lower-bound margins. Higher is closer.
int closeness(const EvidenceItem& item, Direction direction);

enum class FocusRationale { self_focus, accept_path, reject_path };

std::string_view to_string(FocusRationale r);

struct FocusMember {
    std::string node;       // tree node id
    bool relation = false;  // the node's supports(...) relation rather than its belief
    Proposition proposition;

    friend bool operator==(const FocusMember&, const FocusMember&) = default;
};

// One candidate set tried at the node where selection started.
struct FocusCandidate {
    Direction direction = Direction::to_accept;
    std::vector<std::size_t> items;  // indices into the node's potential evidence
    int closeness = 0;
    TriState result = TriState::unsure;
};

struct FocusSet {
    std::vector<FocusMember> members;
    FocusRationale rationale = FocusRationale::self_focus;
    // Chosen resolving sets at the starting node (empty when not searched).
    std::vector<std::size_t> accept_set;
    std::vector<std::size_t> reject_set;
    std::vector<FocusCandidate> candidates;
    bool fallback = false;  // no resolving set existed; focused on the node itself
};

/// Throws not_unsure when the node is already accepted or rejected.
FocusSet select_focus(const ProposedBeliefTree& tree, const TreeEvaluation& evaluation, const std::string& node,
                      const EvaluationConfig& config = {});

}  // namespace parley
