#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "parley/dialogue.hpp"

namespace parley {

using json = nlohmann::json;

inline constexpr std::string_view kTraceSchema = "trace-v1";

struct PredicateDecl {
    std::string name;
    int arity = 0;
    std::string topic;
};

struct Script {
    std::vector<UserInput> common;
    std::map<std::string, std::vector<UserInput>> branches;
};

struct Scenario {
    std::string name;
    std::string description;
    json notes;
    std::vector<PredicateDecl> predicates;
    std::map<std::string, Expertise> user_expertise;
    std::vector<Belief> beliefs;
    std::vector<EvidenceRelation> relations;
    std::vector<PartnerRecord> partner_model;
    std::vector<Recipe> recipes;  // overrides of the built-in ones
    TemplateTable templates;      // overrides of the default table
    EvaluationConfig thresholds;
    std::size_t max_depth = 8;
    Script script;
    std::string default_branch;

    KnowledgeBase knowledge_base() const;
    EngineConfig engine() const;
    // Common turns followed by the branch; an empty name picks the default.
    std::vector<UserInput> script_for(const std::string& branch) const;
};

// Throws parse_error for bad JSON and validation_error for undeclared
// predicates, arity mismatches and bad enum values.
Scenario load_scenario(std::string_view bytes);
Scenario load_scenario_file(const std::filesystem::path& path);
json export_scenario(const Scenario& s);

Session make_session(const Scenario& s, std::string id);

// Claims are validated against the declarations when `decls` is non-empty.
using Declarations = std::map<std::string, PredicateDecl>;

void validate_proposition(const Proposition& p, const Declarations& decls);

// Trees come nested ({id, claim, form, children:[...]}) or flat
// ({root, nodes:[...]}); expertise defaults to the knowledge base's view of
// the claim's topic.
ProposedBeliefTree tree_from_json(const json& j, const KnowledgeBase& kb, const Declarations& decls = {});
json to_json(const ProposedBeliefTree& t);

UserInput input_from_json(const json& j, const KnowledgeBase& kb, const Declarations& decls = {});
json to_json(const UserInput& in);

json to_json(const Endorsement& e);
json to_json(const Belief& b);
json to_json(const EvidenceItem& item);
json to_json(const EvaluationAnnotation& a);
json to_json(const TreeEvaluation& e);
json to_json(const BoundsCase& c);
json to_json(const FocusSet& f);
json to_json(const StrategyChoice& c);
json to_json(const ActionInstance& a);
json to_json(const DiscourseAct& a);
json to_json(const TraceEntry& e);

// Four-level model, belief records with annotations, open actions with live
// precondition status, transcript.
json session_state(const Session& s);

// full-trace, acts-only or text-only. Throws unknown_format.
std::string export_transcript(const Session& s, std::string_view format, const std::string& scenario = {});

// Re-runs the inputs recorded in a full-trace export.
Session replay(const Scenario& scenario, const json& full_trace, std::string id = "replay");

}  // namespace parley
