#include "parley/dialogue.hpp"

#include <algorithm>
#include <cctype>

#include "parley/error.hpp"

namespace parley {

std::string_view to_string(ActKind k) {
    switch (k) {
        case ActKind::express_doubt: return "ExpressDoubt";
        case ActKind::ask_why: return "AskWhy";
        case ActKind::inform_belief: return "InformBelief";
        case ActKind::express_uncertainty: return "ExpressUncertainty";
        case ActKind::accept_ack: return "AcceptAck";
        case ActKind::reject_inform: return "RejectInform";
        case ActKind::propose_belief: return "ProposeBelief";
    }
    return "ProposeBelief";
}

ActKind parse_act_kind(std::string_view t) {
    for (auto k : {ActKind::express_doubt, ActKind::ask_why, ActKind::inform_belief, ActKind::express_uncertainty,
                   ActKind::accept_ack, ActKind::reject_inform, ActKind::propose_belief}) {
        if (to_string(k) == t) return k;
    }
    throw Error(ErrorCode::parse_error, "unknown act kind '" + std::string(t) + "'");
}

std::string_view to_string(Speaker s) { return s == Speaker::system ? "system" : "user"; }

std::string_view to_string(ActStatus s) {
    switch (s) {
        case ActStatus::performed: return "performed";
        case ActStatus::achieved: return "achieved";
        case ActStatus::abandoned: return "abandoned";
    }
    return "performed";
}

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::awaiting_proposal: return "awaiting-proposal";
        case Phase::awaiting_response: return "awaiting-response";
        case Phase::concluded_accept: return "concluded-accept";
        case Phase::concluded_reject: return "concluded-reject";
    }
    return "awaiting-proposal";
}

std::string_view to_string(InputKind k) {
    switch (k) {
        case InputKind::propose: return "propose";
        case InputKind::accept: return "accept";
        case InputKind::reject_with_counter: return "reject-with-counter";
        case InputKind::provide_support: return "provide-support";
        case InputKind::counter_proposal: return "counter-proposal";
    }
    return "propose";
}

InputKind parse_input_kind(std::string_view t) {
    for (auto k : {InputKind::propose, InputKind::accept, InputKind::reject_with_counter, InputKind::provide_support,
                   InputKind::counter_proposal}) {
        if (to_string(k) == t) return k;
    }
    throw Error(ErrorCode::malformed_response, "unknown reply kind '" + std::string(t) + "'");
}

std::string_view to_string(Origin o) {
    switch (o) {
        case Origin::top: return "top";
        case Origin::counter: return "counter";
        case Origin::support: return "support";
        case Origin::proposal: return "proposal";
    }
    return "top";
}

UserInput UserInput::propose(ProposedBeliefTree t) { return {InputKind::propose, std::nullopt, std::move(t)}; }
UserInput UserInput::accept() { return {InputKind::accept, std::nullopt, std::nullopt}; }
UserInput UserInput::reject_with_counter(Proposition target, ProposedBeliefTree t) {
    return {InputKind::reject_with_counter, std::move(target), std::move(t)};
}
UserInput UserInput::provide_support(ProposedBeliefTree t) {
    return {InputKind::provide_support, std::nullopt, std::move(t)};
}
UserInput UserInput::counter_proposal(ProposedBeliefTree t) {
    return {InputKind::counter_proposal, std::nullopt, std::move(t)};
}

// --- surface -------------------------------------------------------------------

TemplateTable default_templates() {
    return {
        {"ExpressDoubt", "Isn't {p}?"},
        {"InformBelief", "Isn't {p}?"},
        {"AskWhy", "Why do you think {p}?"},
        {"ExpressUncertainty", "I'm not sure that {p}."},
        {"AcceptAck", "Okay, {p}."},
        {"RejectInform", "I don't think {p}, because {q}."},
        {"RejectInform-unjustified", "I don't think {p}."},
        {"ProposeBelief", "{p}."},
    };
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
}

}  // namespace

std::string phrase(const Proposition& p) {
    if (p.is_support()) {
        return phrase(p.child()) + (p.positive() ? " is evidence for " : " is not evidence for ") + phrase(p.parent());
    }
    const auto& args = p.args();
    std::string verb = lower(p.predicate());
    if (args.empty()) return p.positive() ? verb : "not " + verb;
    std::string out = args[0];
    if (!p.positive()) out += " not";
    out += " " + verb;
    for (std::size_t i = 1; i < args.size(); ++i) out += " " + args[i];
    return out;
}

std::string realize(const DiscourseAct& act, const TemplateTable& templates) {
    std::string key(to_string(act.kind));
    if (act.kind == ActKind::reject_inform && act.propositions.size() < 2) key += "-unjustified";
    auto it = templates.find(key);
    if (it == templates.end()) throw Error(ErrorCode::missing_template, "no template for " + key);
    std::string out = it->second;
    if (!act.propositions.empty()) replace_all(out, "{p}", phrase(act.propositions[0]));
    if (act.propositions.size() > 1) replace_all(out, "{q}", phrase(act.propositions[1]));
    // A relation flagged implicit never reaches the surface; an explicit one
    // is appended through {r} when the template asks for it.
    replace_all(out, "{r}", act.relation && !act.relation_implicit ? phrase(*act.relation) : std::string());
    return out;
}

// --- session -------------------------------------------------------------------

Session::Session(std::string id, KnowledgeBase kb, EngineConfig config)
    : id_(std::move(id)), kb_(std::move(kb)), config_(std::move(config)) {
    model_.domain = {
        {"domain", "Domain-Plan", "stub; the user's domain goal is not modelled"},
        {"problem-solving", "Build-Plan", "stub"},
        {"problem-solving", "Share-Info-Reevaluate-Belief", "stub; expanded at the belief level below"},
    };
}

std::vector<DiscourseAct> Session::since_call() const {
    return {model_.acts.begin() + static_cast<std::ptrdiff_t>(call_start_), model_.acts.end()};
}

TraceEntry& Session::log(std::string event) {
    TraceEntry e;
    e.turn = turns_.empty() ? 0 : turns_.back().index;
    e.event = std::move(event);
    e.depth = model_.stack.size();
    trace_.push_back(std::move(e));
    return trace_.back();
}

void Session::begin_turn(Speaker s) {
    if (!turns_.empty() && turns_.back().speaker == s) return;
    Turn t;
    t.index = static_cast<int>(turns_.size());
    t.speaker = s;
    t.timestamp = t.index;
    turns_.push_back(std::move(t));
}

DiscourseAct& Session::emit(DiscourseAct act) {
    begin_turn(act.speaker);
    act.id = static_cast<int>(model_.acts.size()) + 1;
    act.turn = turns_.back().index;
    act.surface = realize(act, config_.templates);
    turns_.back().acts.push_back(act.id);
    model_.acts.push_back(std::move(act));
    return model_.acts.back();
}

namespace {

// A still-pending system act that opened `action`. Acknowledgements carry no
// disjunct and are never reopened.
bool opening(const DiscourseAct& a, int action) {
    return a.speaker == Speaker::system && a.action_id == action && a.disjunct && a.status == ActStatus::performed;
}

}  // namespace

std::vector<DiscourseAct> Session::apply(const UserInput& input) {
    if (input.kind == InputKind::propose) {
        if (!input.tree) throw Error(ErrorCode::malformed_tree, "proposal without a tree");
        return process_proposal(*input.tree);
    }
    return process_response(input);
}

TreeEvaluation Session::preview(const ProposedBeliefTree& tree) const {
    return evaluate_tree(tree, kb_, config_.evaluation);
}

void Session::user_tree_acts(const ProposedBeliefTree& tree) {
    std::optional<int> serving;
    if (!model_.stack.empty()) serving = model_.stack.back().action.id;
    std::vector<std::string> pending{tree.root()};
    while (!pending.empty()) {
        const TreeNode& n = tree.node(pending.back());
        pending.pop_back();
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) pending.push_back(*it);

        DiscourseAct a;
        a.kind = ActKind::propose_belief;
        a.speaker = Speaker::user;
        a.propositions = {n.belief.proposition};
        a.strengths = {n.belief.strength};
        if (n.relation) {
            a.relation = n.relation->claim();
            a.relation_implicit = true;
        }
        if (!n.belief.endorsements.empty()) a.form = n.belief.endorsements.front().form;
        a.action_id = serving;
        emit(std::move(a));
    }
}

void Session::note_partner_support(const ProposedBeliefTree& tree) {
    for (const auto& n : tree.nodes()) {
        if (n.children.empty()) continue;
        std::vector<Proposition> support;
        for (const auto& c : n.children) support.push_back(tree.node(c).belief.proposition);
        kb_.record_partner_support(n.belief.proposition, std::move(support));
    }
}

bool Session::repeated(const ProposedBeliefTree& tree) { return !seen_trees_.insert(tree.canonical()).second; }

void Session::reject_repeat(const ProposedBeliefTree& tree) {
    DiscourseAct a;
    a.kind = ActKind::reject_inform;
    a.propositions = {tree.node(tree.root()).belief.proposition};
    emit(std::move(a));
    log("repeat").note = "tree already proposed in this session";
    phase_ = Phase::awaiting_response;
}

int Session::add_record(ProposedBeliefTree tree, Origin origin, std::optional<Proposition> target) {
    BeliefRecord r;
    r.id = static_cast<int>(model_.records.size());
    r.tree_id = "t" + std::to_string(r.id + 1);
    r.tree = std::move(tree);
    r.origin = origin;
    r.target = std::move(target);
    if (!model_.stack.empty()) r.parent_action = model_.stack.back().action.id;
    r.depth = static_cast<int>(model_.stack.size());
    model_.records.push_back(std::move(r));
    return model_.records.back().id;
}

std::vector<DiscourseAct> Session::process_proposal(const ProposedBeliefTree& tree) {
    if (concluded()) throw Error(ErrorCode::session_concluded, "session " + id_ + " has concluded");
    if (tree.root().empty()) throw Error(ErrorCode::malformed_tree, "empty tree");
    if (phase_ == Phase::awaiting_response) return process_response(UserInput::counter_proposal(tree));

    inputs_.push_back(UserInput::propose(tree));
    call_start_ = model_.acts.size();
    user_tree_acts(tree);
    seen_trees_.insert(tree.canonical());
    note_partner_support(tree);
    dispatch(add_record(tree, Origin::top, std::nullopt));
    return since_call();
}

std::vector<DiscourseAct> Session::process_response(const UserInput& in) {
    if (concluded()) throw Error(ErrorCode::session_concluded, "session " + id_ + " has concluded");
    if (model_.stack.empty()) throw Error(ErrorCode::no_open_action, "nothing is awaiting a reply");
    if (in.kind == InputKind::propose) throw Error(ErrorCode::malformed_response, "a proposal is not a reply");
    if (in.kind != InputKind::accept && !in.tree)
        throw Error(ErrorCode::malformed_response, std::string(to_string(in.kind)) + " needs a tree");
    if (in.kind == InputKind::reject_with_counter && !in.target)
        throw Error(ErrorCode::malformed_response, "reject-with-counter needs a target");

    inputs_.push_back(in);
    call_start_ = model_.acts.size();
    const Frame top = model_.stack.back();

    if (in.kind == InputKind::accept) {
        DiscourseAct ack;
        ack.kind = ActKind::accept_ack;
        ack.speaker = Speaker::user;
        ack.action_id = top.action.id;
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < model_.acts.size(); ++i) {
            const auto& a = model_.acts[i];
            if (!opening(a, top.action.id)) continue;
            open.push_back(i);
            for (const auto& p : a.pursues)
                if (std::find(ack.propositions.begin(), ack.propositions.end(), p) == ack.propositions.end())
                    ack.propositions.push_back(p);
        }
        if (ack.propositions.empty()) ack.propositions.push_back(top.focus.proposition);
        emit(std::move(ack));

        for (auto i : open) {
            const DiscourseAct a = model_.acts[i];
            if (a.kind == ActKind::ask_why) {
                kb_.record_partner_support(a.propositions.front(), {});
            } else if (a.kind != ActKind::express_uncertainty) {
                for (const auto& p : a.pursues) establish_mutual(p);
            }
        }
        // Accepting doubt, counterevidence or uncertainty about the focus
        // means the user no longer stands by it.
        if (top.choice.kind != StrategyKind::ask_why) kb_.concede(top.focus.proposition);
        log("accept-reply").action = top.action.id;

        if (auto idx = frame_satisfied(model_.stack.back()))
            resume_frame(*idx);
        else
            abandon_frame("accepted but preconditions still open");
        return since_call();
    }

    const ProposedBeliefTree& tree = *in.tree;
    user_tree_acts(tree);
    if (repeated(tree)) {
        reject_repeat(tree);
        return since_call();
    }
    note_partner_support(tree);
    const Proposition& reply_root = tree.node(tree.root()).belief.proposition;

    switch (in.kind) {
        case InputKind::provide_support: {
            if (!top.focus.relation) {
                std::vector<Proposition> support;
                if (reply_root == top.focus.proposition) {
                    for (const auto& c : tree.node(tree.root()).children) support.push_back(tree.node(c).belief.proposition);
                } else {
                    support.push_back(reply_root);
                }
                kb_.record_partner_support(top.focus.proposition, support);
                auto& rec = model_.records[top.record];
                const std::string prefix = "s" + std::to_string(inputs_.size()) + "-";
                rec.tree = rec.tree.graft(top.focus.node, tree, prefix);
                auto& e = log("graft");
                e.record = rec.id;
                e.note = "support attached below " + top.focus.node;
                if (auto idx = frame_satisfied(model_.stack.back()))
                    resume_frame(*idx);
                else
                    abandon_frame("support received for a different precondition");
            } else {
                kb_.record_partner_support(top.focus.proposition, {reply_root});
                dispatch(add_record(tree, Origin::support, top.focus.proposition));
            }
            break;
        }
        case InputKind::reject_with_counter:
            dispatch(add_record(tree, Origin::counter, in.target));
            break;
        case InputKind::counter_proposal:
            dispatch(add_record(tree, Origin::proposal, std::nullopt));
            break;
        default: break;
    }
    return since_call();
}

std::vector<DiscourseAct> Session::resume_after_info() {
    if (concluded()) throw Error(ErrorCode::session_concluded, "session " + id_ + " has concluded");
    if (model_.stack.empty()) throw Error(ErrorCode::no_open_action, "no open action");
    auto idx = frame_satisfied(model_.stack.back());
    if (!idx)
        throw Error(ErrorCode::preconditions_still_open,
                    "preconditions of " + model_.stack.back().action.name + " still open");
    call_start_ = model_.acts.size();
    resume_frame(*idx);
    return since_call();
}

void Session::dispatch(int record) {
    TreeEvaluation eval = evaluate_tree(model_.records[record].tree, kb_, config_.evaluation);
    const std::string root_id = model_.records[record].tree.root();
    const EvaluationAnnotation root = eval.at(root_id).belief;
    const BoundsCase fc = classify_combination(root.upper, root.lower);
    {
        auto& r = model_.records[record];
        r.evaluation = eval;
        r.bounds_case = fc;
        auto& e = log("evaluate");
        e.record = record;
        e.evaluation = eval;
        e.root = root_id;
        e.bounds_case = fc;
    }
    if (fc.number == 1) {
        accept_record(record, eval);
    } else if (fc.number == 6) {
        reject_record(record, root, "case 6");
    } else if (!open_action(record, eval)) {
        reject_record(record, root, "no untried strategy left");
    }
}

void Session::accept_record(int record, const TreeEvaluation& eval) {
    const ProposedBeliefTree tree = model_.records[record].tree;
    const Proposition root = tree.node(tree.root()).belief.proposition;

    DiscourseAct a;
    a.kind = ActKind::accept_ack;
    a.propositions = {root};
    a.pursues = {root};
    a.action_id = model_.records[record].parent_action;
    emit(std::move(a));

    // The root and every accepted piece of evidence under it become shared.
    std::vector<std::string> pending{tree.root()};
    establish_mutual(root);
    while (!pending.empty()) {
        const std::string id = pending.back();
        pending.pop_back();
        for (const auto& item : eval.at(id).belief.evidence) {
            if (item.from_kb()) continue;
            establish_mutual(tree.node(item.child_node).belief.proposition);
            establish_mutual(item.relation.claim());
            pending.push_back(item.child_node);
        }
    }
    model_.records[record].outcome = TriState::accept;
    log("accept").record = record;
    on_resolved(record);
}

void Session::reject_record(int record, const EvaluationAnnotation& root, const std::string& why) {
    const EvidenceItem* cite = nullptr;
    for (const auto* items : {&root.evidence, &root.potential})
        for (const auto& item : *items)
            if (item.attacks(root.proposition) && (!cite || rank(item.effective) > rank(cite->effective))) cite = &item;

    DiscourseAct a;
    a.kind = ActKind::reject_inform;
    a.propositions = {root.proposition};
    if (cite) {
        a.propositions.push_back(cite->child.proposition);
        a.strengths = {cite->effective};
        a.relation = cite->relation.claim();
        a.relation_implicit = true;
    }
    a.pursues = {negate(root.proposition)};
    a.action_id = model_.records[record].parent_action;
    emit(std::move(a));

    auto& r = model_.records[record];
    r.outcome = TriState::reject;
    if (r.origin == Origin::top) {
        Strength s = cite ? cite->effective : Strength::weak;
        for (const auto& b : root.base)
            if (b.proposition == negate(root.proposition)) s = std::max(s, b.strength);
        kb_.add_belief(Belief(negate(root.proposition), {Endorsement::own(s)}, "concluded"));
    }
    auto& e = log("reject");
    e.record = record;
    e.note = why;
    on_resolved(record);
}

bool Session::open_action(int record, const TreeEvaluation& eval) {
    if (model_.stack.size() >= config_.max_depth) {
        log("exhaust").note = "embedding limit reached";
        return false;
    }
    const auto& r0 = model_.records[record];
    FocusSet fs = select_focus(r0.tree, eval, r0.tree.root(), config_.evaluation);
    model_.records[record].focus = fs;

    for (const auto& m : fs.members) {
        const auto& node_eval = eval.at(m.node);
        const EvaluationAnnotation& ann = m.relation ? *node_eval.relation : node_eval.belief;
        if (ann.status() != TriState::unsure) continue;
        StrategyChoice choice = select_strategy(ann, kb_, config_.evaluation);
        auto key = std::make_tuple(record, m.proposition.str(), choice.kind);
        if (tried_.contains(key)) continue;
        tried_.insert(key);

        const auto& r = model_.records[record];
        InstantiationContext ctx{r.tree, r.tree_id, ann, kb_, config_.evaluation};
        ActionInstance action;
        try {
            action = instantiate_recipe(config_.recipes, choice, ctx, next_action_);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::applicability_violation) throw;
            log("inapplicable").note = err.what();
            continue;
        }
        ++next_action_;

        Frame f;
        f.action = action;
        f.record = record;
        f.focus = m;
        f.choice = choice;
        f.status_then = ann.status();
        f.support_then = ann.support;
        f.attack_then = ann.attack;
        model_.stack.push_back(f);
        {
            auto& e = log("open-action");
            e.record = record;
            e.focus = fs;
            e.strategy = choice;
            e.action = action.id;
        }

        const Proposition& bel1 = m.proposition;
        auto counter_act = [&](ActKind kind, std::size_t disjunct) {
            const EvidenceItem& c = *choice.counterevidence;
            DiscourseAct a;
            a.kind = kind;
            a.propositions = {c.child.proposition};
            a.strengths = {c.child.strength};
            a.relation = c.relation.claim();
            a.relation_implicit = true;
            a.action_id = action.id;
            a.disjunct = disjunct;
            a.pursues = {c.child.proposition, c.relation.claim()};
            emit(std::move(a));
        };
        auto focus_act = [&](ActKind kind) {
            DiscourseAct a;
            a.kind = kind;
            a.propositions = {bel1};
            a.strengths = {ann.held};
            a.action_id = action.id;
            a.disjunct = 0;
            a.pursues = {bel1};
            emit(std::move(a));
        };
        switch (choice.kind) {
            case StrategyKind::invite_attack: counter_act(ActKind::express_doubt, 0); break;
            case StrategyKind::ask_why: focus_act(ActKind::ask_why); break;
            case StrategyKind::ask_why_with_counter:
                focus_act(ActKind::ask_why);
                counter_act(ActKind::inform_belief, 1);
                break;
            case StrategyKind::express_uncertainty:
                focus_act(ActKind::express_uncertainty);
                if (choice.counterevidence) counter_act(ActKind::inform_belief, 0);
                break;
        }
        phase_ = Phase::awaiting_response;
        return true;
    }
    log("exhaust").note = "every focus and strategy already tried";
    return false;
}

void Session::on_resolved(int record) {
    const BeliefRecord& r = model_.records[record];
    if (r.origin == Origin::top) {
        conclude(*r.outcome);
        return;
    }
    if (r.outcome == TriState::accept && (r.origin == Origin::counter || r.origin == Origin::support))
        consequence(record);
    if (model_.stack.empty()) {
        phase_ = Phase::awaiting_proposal;
        return;
    }
    if (auto idx = frame_satisfied(model_.stack.back())) {
        resume_frame(*idx);
    } else {
        phase_ = Phase::awaiting_response;
    }
}

// An accepted counter R against T is checked as the two-node argument
// "R, therefore not T"; accepted support S for a relation as "S, therefore
// the relation".
void Session::consequence(int record) {
    const BeliefRecord r = model_.records[record];
    if (!r.target) return;
    const Proposition conclusion = r.origin == Origin::counter ? negate(*r.target) : *r.target;
    const TreeNode& reply_root = r.tree.node(r.tree.root());
    SemanticForm form = SemanticForm::direct_assertion;
    if (!reply_root.belief.endorsements.empty() &&
        reply_root.belief.endorsements.front().source == Source::partner_statement)
        form = reply_root.belief.endorsements.front().form;

    TreeNode top;
    top.id = "c";
    top.belief = Belief(conclusion, {Endorsement::partner(form, kb_.expertise_for(conclusion))});
    top.children = {"r"};
    TreeNode child;
    child.id = "r";
    child.belief = reply_root.belief;
    const Proposition rel = Proposition::supports(reply_root.belief.proposition, conclusion);
    child.relation = EvidenceRelation(reply_root.belief.proposition, conclusion,
                                      {Endorsement::partner(form, kb_.expertise_for(rel))});
    const auto tree = ProposedBeliefTree::build({top, child}, "c");
    const auto eval = evaluate_tree(tree, kb_, config_.evaluation);
    const auto& ann = eval.at("c").belief;

    auto& e = log("consequence");
    e.record = record;
    e.evaluation = eval;
    e.root = "c";
    e.note = conclusion.str() + " " + std::string(to_string(ann.status()));
    if (ann.status() != TriState::accept) return;

    establish_mutual(conclusion);
    establish_mutual(rel);
    DiscourseAct a;
    a.kind = ActKind::accept_ack;
    a.propositions = {conclusion};
    a.pursues = {conclusion};
    a.action_id = r.parent_action;
    emit(std::move(a));
}

void Session::establish_mutual(const Proposition& p) {
    kb_.add_mutual(p);
    kb_.add_belief(Belief(p, {Endorsement::own(Strength::warranted)}, "mutual"));
}

void Session::conclude(TriState outcome) {
    phase_ = outcome == TriState::accept ? Phase::concluded_accept : Phase::concluded_reject;
    model_.stack.clear();
    log("conclude").note = std::string(to_string(phase_));
}

bool Session::focus_changed(const Frame& f) const {
    const auto eval = evaluate_tree(model_.records[f.record].tree, kb_, config_.evaluation);
    const auto& node = eval.at(f.focus.node);
    const EvaluationAnnotation& ann = f.focus.relation ? *node.relation : node.belief;
    return ann.status() != f.status_then || ann.support != f.support_then || ann.attack != f.attack_then;
}

std::optional<std::size_t> Session::frame_satisfied(const Frame& f) const {
    return check_preconditions(f.action, kb_, [&](const Proposition&) { return focus_changed(f); });
}

std::vector<bool> Session::disjunct_status(std::size_t index) const {
    const Frame& f = model_.stack.at(index);
    ChangeProbe probe = [&](const Proposition&) { return focus_changed(f); };
    std::vector<bool> out;
    for (const auto& conj : f.action.preconditions) out.push_back(holds(conj, f.action.binding, kb_, probe));
    return out;
}

void Session::resume_frame(std::size_t disjunct) {
    Frame f = model_.stack.back();
    model_.stack.pop_back();
    f.action.status = ActionStatus::done;
    for (auto& a : model_.acts) {
        if (!opening(a, f.action.id)) continue;
        const bool shared = !a.pursues.empty() && a.kind != ActKind::ask_why &&
                            a.kind != ActKind::express_uncertainty &&
                            std::all_of(a.pursues.begin(), a.pursues.end(),
                                        [&](const Proposition& p) { return kb_.mutual(p); });
        a.status = (a.disjunct == disjunct || shared) ? ActStatus::achieved : ActStatus::abandoned;
    }
    model_.closed.push_back(f.action);
    auto& e = log("resume");
    e.record = f.record;
    e.action = f.action.id;
    e.disjunct = disjunct;
    dispatch(f.record);
}

void Session::abandon_frame(const std::string& why) {
    Frame f = model_.stack.back();
    model_.stack.pop_back();
    f.action.status = ActionStatus::abandoned;
    for (auto& a : model_.acts)
        if (opening(a, f.action.id)) a.status = ActStatus::abandoned;
    model_.closed.push_back(f.action);
    auto& e = log("abandon");
    e.record = f.record;
    e.action = f.action.id;
    e.note = why;
    dispatch(f.record);
}

}  // namespace parley
