#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parley/dialogue.hpp"
#include "parley/scenario.hpp"

namespace parley::testing {

std::string source_dir();
std::string scenario_path(const std::string& name);

// Hand-built knowledge bases for the strategy decision table. The focus is
// always the root n0 of a one-node proposal.
struct StrategyCase {
    std::string name;
    KnowledgeBase kb;
    ProposedBeliefTree tree;
    StrategyKind expected = StrategyKind::ask_why;
    std::optional<Proposition> counter;  // child of the expected counterevidence
};

std::vector<StrategyCase> strategy_cases();

struct SessionRun {
    std::uint64_t seed = 0;
    bool concluded = false;
    std::size_t turns = 0;      // raw turns, both speakers
    std::size_t exchanges = 0;  // user turns, each answered by the system
    std::size_t in_play = 0;  // distinct propositions mentioned in acts
    std::size_t max_depth = 0;
    int rejected_inputs = 0;  // replies the engine refused
    std::string violation;    // empty when every step kept the invariants
};

// Random proposal followed by a random reply policy that turns to plain
// acceptance after `free_replies` replies.
SessionRun random_session(std::uint64_t seed, int free_replies = 6, std::size_t max_steps = 400);

}  // namespace parley::testing
