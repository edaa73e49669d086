#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "parley/focus.hpp"
#include "parley/strategy.hpp"

namespace parley {

enum class ActKind { express_doubt, ask_why, inform_belief, express_uncertainty, accept_ack, reject_inform, propose_belief };
enum class Speaker { system, user };
enum class ActStatus { performed, achieved, abandoned };

std::string_view to_string(ActKind k);
std::string_view to_string(Speaker s);
std::string_view to_string(ActStatus s);
ActKind parse_act_kind(std::string_view text);

struct DiscourseAct {
    int id = 0;
    int turn = 0;
    ActKind kind = ActKind::propose_belief;
    Speaker speaker = Speaker::system;
    std::vector<Proposition> propositions;
    std::vector<Strength> strengths;
    std::optional<Proposition> relation;
    bool relation_implicit = false;
    SemanticForm form = SemanticForm::none;  // user proposals only
    std::string surface;
    // Action instance served and the precondition disjunct it works towards.
    std::optional<int> action_id;
    std::optional<std::size_t> disjunct;
    std::vector<Proposition> pursues;
    ActStatus status = ActStatus::performed;
};

// Template table keyed by act kind name ("ExpressDoubt", ...). RejectInform
// uses "RejectInform" when a justification is cited and
// "RejectInform-unjustified" otherwise. {p} and {q} are the first two
// propositions.
using TemplateTable = std::map<std::string, std::string>;

TemplateTable default_templates();

// Surface phrase of a proposition: "Smith on-sabbatical next-year".
std::string phrase(const Proposition& p);

std::string realize(const DiscourseAct& act, const TemplateTable& templates);

enum class Phase { awaiting_proposal, awaiting_response, concluded_accept, concluded_reject };

std::string_view to_string(Phase p);

enum class InputKind { propose, accept, reject_with_counter, provide_support, counter_proposal };

std::string_view to_string(InputKind k);
InputKind parse_input_kind(std::string_view text);

struct UserInput {
    InputKind kind = InputKind::propose;
    std::optional<Proposition> target;  // reject-with-counter only
    std::optional<ProposedBeliefTree> tree;

    static UserInput propose(ProposedBeliefTree t);
    static UserInput accept();
    static UserInput reject_with_counter(Proposition target, ProposedBeliefTree t);
    static UserInput provide_support(ProposedBeliefTree t);
    static UserInput counter_proposal(ProposedBeliefTree t);
};

enum class Origin { top, counter, support, proposal };

std::string_view to_string(Origin o);

// One proposed tree under evaluation at the belief level.
struct BeliefRecord {
    int id = 0;
    std::string tree_id;
    ProposedBeliefTree tree;
    Origin origin = Origin::top;
    std::optional<Proposition> target;  // counter: what it argues against; support: the relation it backs
    std::optional<int> parent_action;   // action whose precondition it addresses
    int depth = 0;                      // stack depth when it arrived
    std::optional<TreeEvaluation> evaluation;
    std::optional<BoundsCase> bounds_case;
    std::optional<FocusSet> focus;
    std::optional<TriState> outcome;
};

struct Frame {
    ActionInstance action;
    int record = 0;
    FocusMember focus;
    StrategyChoice choice;
    // Focus annotation at the time the action opened, for annotation-changed.
    TriState status_then = TriState::unsure;
    int support_then = 0;
    int attack_then = 0;
};

struct DomainEntry {
    std::string level;  // "domain" or "problem-solving"
    std::string name;
    std::string note;
};

struct DialogueModel {
    std::vector<DomainEntry> domain;  // inert stubs above the belief level
    std::vector<Frame> stack;
    std::vector<ActionInstance> closed;
    std::vector<BeliefRecord> records;
    std::vector<DiscourseAct> acts;

    std::size_t depth() const { return stack.size(); }
};

struct Turn {
    int index = 0;
    Speaker speaker = Speaker::user;
    std::vector<int> acts;
    int timestamp = 0;  // logical clock
};

struct TraceEntry {
    int turn = 0;
    std::string event;  // evaluate, open-action, accept, reject, consequence, resume, abandon, exhaust, repeat, conclude
    std::optional<int> record;
    std::optional<TreeEvaluation> evaluation;
    std::optional<std::string> root;  // root node id of the evaluated tree
    std::optional<BoundsCase> bounds_case;
    std::optional<FocusSet> focus;
    std::optional<StrategyChoice> strategy;
    std::optional<int> action;
    std::optional<std::size_t> disjunct;
    std::size_t depth = 0;
    std::string note;
};

struct EngineConfig {
    EvaluationConfig evaluation;
    RecipeBook recipes;
    TemplateTable templates = default_templates();
    std::size_t max_depth = 8;
};

class Session {
public:
    Session(std::string id, KnowledgeBase kb, EngineConfig config = {});

    const std::string& id() const { return id_; }
    Phase phase() const { return phase_; }
    bool concluded() const { return phase_ == Phase::concluded_accept || phase_ == Phase::concluded_reject; }
    const KnowledgeBase& kb() const { return kb_; }
    const EngineConfig& config() const { return config_; }
    const DialogueModel& model() const { return model_; }
    const std::vector<Turn>& turns() const { return turns_; }
    const std::vector<TraceEntry>& trace() const { return trace_; }
    const std::vector<UserInput>& inputs() const { return inputs_; }

    // Dispatches on the input kind. Returns the acts performed during the call.
    std::vector<DiscourseAct> apply(const UserInput& input);

    std::vector<DiscourseAct> process_proposal(const ProposedBeliefTree& tree);
    std::vector<DiscourseAct> process_response(const UserInput& response);
    std::vector<DiscourseAct> resume_after_info();

    // Which precondition disjuncts of the stack frame at `index` hold now.
    std::vector<bool> disjunct_status(std::size_t index) const;

    // Current evaluation of a tree against the session's knowledge; no effect.
    TreeEvaluation preview(const ProposedBeliefTree& tree) const;

private:
    void begin_turn(Speaker s);
    DiscourseAct& emit(DiscourseAct act);
    void user_tree_acts(const ProposedBeliefTree& tree);
    void note_partner_support(const ProposedBeliefTree& tree);
    bool repeated(const ProposedBeliefTree& tree);
    void reject_repeat(const ProposedBeliefTree& tree);
    int add_record(ProposedBeliefTree tree, Origin origin, std::optional<Proposition> target);

    void dispatch(int record);
    void accept_record(int record, const TreeEvaluation& eval);
    void reject_record(int record, const EvaluationAnnotation& root, const std::string& why);
    bool open_action(int record, const TreeEvaluation& eval);
    void on_resolved(int record);
    void consequence(int record);
    void establish_mutual(const Proposition& p);
    void conclude(TriState outcome);
    bool focus_changed(const Frame& f) const;
    std::optional<std::size_t> frame_satisfied(const Frame& f) const;
    void resume_frame(std::size_t disjunct);
    void abandon_frame(const std::string& why);

    TraceEntry& log(std::string event);
    std::vector<DiscourseAct> since_call() const;

    std::string id_;
    KnowledgeBase kb_;
    EngineConfig config_;
    DialogueModel model_;
    Phase phase_ = Phase::awaiting_proposal;
    std::vector<Turn> turns_;
    std::vector<TraceEntry> trace_;
    std::vector<UserInput> inputs_;
    std::set<std::tuple<int, std::string, StrategyKind>> tried_;
    std::set<std::string> seen_trees_;
    int next_action_ = 1;
    std::size_t call_start_ = 0;  // first act id of the current call
};

}  // namespace parley
