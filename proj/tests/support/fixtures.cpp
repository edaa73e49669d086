#include "fixtures.hpp"

#include <random>
#include <set>

#include "instances.hpp"
#include "parley/error.hpp"

#ifndef PARLEY_SOURCE_DIR
#define PARLEY_SOURCE_DIR "."
#endif

namespace parley::testing {

std::string source_dir() { return PARLEY_SOURCE_DIR; }

std::string scenario_path(const std::string& name) { return source_dir() + "/scenarios/" + name + ".json"; }

namespace {

const Proposition kFocus = parse_proposition("Cancelled(AI-course)");

ProposedBeliefTree single(SemanticForm form, Expertise level) {
    TreeNode n;
    n.id = "n0";
    n.belief = Belief(kFocus, {Endorsement::partner(form, level)}, "n0");
    return ProposedBeliefTree::build({n}, "n0");
}

void own(KnowledgeBase& kb, const std::string& claim, Strength s) {
    kb.add_belief(Belief(parse_proposition(claim), {Endorsement::own(s)}));
}

// Evidence `child` for or against the focus, held at the given strengths.
void chain(KnowledgeBase& kb, const std::string& child, bool against, Strength child_s, Strength rel_s) {
    const Proposition c = parse_proposition(child);
    own(kb, child, child_s);
    kb.add_belief(Belief(Proposition::supports(c, against ? negate(kFocus) : kFocus), {Endorsement::own(rel_s)}));
}

void knows_why(KnowledgeBase& kb) { kb.record_partner_support(kFocus, {parse_proposition("Announced(dept)")}); }

}  // namespace

std::vector<StrategyCase> strategy_cases() {
    using F = SemanticForm;
    using E = Expertise;
    using S = Strength;
    std::vector<StrategyCase> out;
    auto add = [&](std::string name, KnowledgeBase kb, ProposedBeliefTree t, StrategyKind k,
                   std::optional<std::string> counter = std::nullopt) {
        std::optional<Proposition> c;
        if (counter) c = parse_proposition(*counter);
        out.push_back({std::move(name), std::move(kb), std::move(t), k, c});
    };

    {  // nothing known either way
        KnowledgeBase kb;
        add("ask-why/bare", kb, single(F::hedged, E::novice), StrategyKind::ask_why);
    }
    {  // a flat contrary belief is not counterevidence
        KnowledgeBase kb;
        own(kb, "~Cancelled(AI-course)", S::weak);
        add("ask-why/flat-doubt", kb, single(F::direct_assertion, E::novice), StrategyKind::ask_why);
    }
    {  // own supporting chain, strong contrary belief
        KnowledgeBase kb;
        own(kb, "~Cancelled(AI-course)", S::strong);
        chain(kb, "Low-Enrolment(AI-course)", false, S::strong, S::weak);
        add("ask-why/support-only", kb, single(F::hedged, E::expert), StrategyKind::ask_why);
    }
    {  // one weak counter, removal leaves margin 1
        KnowledgeBase kb;
        chain(kb, "Room-Booked(AI-course)", true, S::weak, S::strong);
        add("with-counter/weak", kb, single(F::hedged, E::novice), StrategyKind::ask_why_with_counter,
            "Room-Booked(AI-course)");
    }
    {
        KnowledgeBase kb;
        own(kb, "~Cancelled(AI-course)", S::strong);
        chain(kb, "Room-Booked(AI-course)", true, S::warranted, S::weak);
        add("with-counter/contrary", kb, single(F::direct_assertion, E::expert), StrategyKind::ask_why_with_counter,
            "Room-Booked(AI-course)");
    }
    {  // two weak counters, neither decisive alone
        KnowledgeBase kb;
        own(kb, "Cancelled(AI-course)", S::weak);
        chain(kb, "Room-Booked(AI-course)", true, S::weak, S::weak);
        chain(kb, "Instructor-Hired(AI-course)", true, S::weak, S::strong);
        add("with-counter/two", kb, single(F::hedged, E::apprentice), StrategyKind::ask_why_with_counter,
            "Instructor-Hired(AI-course)");
    }
    {  // knows the reasons, nothing against
        KnowledgeBase kb;
        knows_why(kb);
        add("uncertainty/no-counter", kb, single(F::hedged, E::novice), StrategyKind::express_uncertainty);
    }
    {
        KnowledgeBase kb;
        knows_why(kb);
        chain(kb, "Room-Booked(AI-course)", true, S::weak, S::weak);
        add("uncertainty/weak-counter", kb, single(F::hedged, E::novice), StrategyKind::express_uncertainty,
            "Room-Booked(AI-course)");
    }
    {
        KnowledgeBase kb;
        knows_why(kb);
        own(kb, "~Cancelled(AI-course)", S::weak);
        chain(kb, "Room-Booked(AI-course)", true, S::strong, S::weak);
        add("uncertainty/contrary", kb, single(F::direct_assertion, E::novice), StrategyKind::express_uncertainty,
            "Room-Booked(AI-course)");
    }
    {  // the course-advisement shape
        KnowledgeBase kb;
        own(kb, "Cancelled(AI-course)", S::strong);
        chain(kb, "Instructor-Left(AI-course)", true, S::strong, S::warranted);
        add("invite/decisive", kb, single(F::direct_assertion, E::apprentice), StrategyKind::invite_attack,
            "Instructor-Left(AI-course)");
    }
    {  // criticality beats knowing the reasons
        KnowledgeBase kb;
        knows_why(kb);
        chain(kb, "Instructor-Left(AI-course)", true, S::weak, S::warranted);
        add("invite/despite-knowref", kb, single(F::tag_question, E::novice), StrategyKind::invite_attack,
            "Instructor-Left(AI-course)");
    }
    {  // only the strong counter is critical
        KnowledgeBase kb;
        own(kb, "Cancelled(AI-course)", S::weak);
        chain(kb, "Room-Booked(AI-course)", true, S::weak, S::strong);
        chain(kb, "Instructor-Left(AI-course)", true, S::strong, S::strong);
        add("invite/picks-critical", kb, single(F::tag_question, E::expert), StrategyKind::invite_attack,
            "Instructor-Left(AI-course)");
    }
    return out;
}

namespace {

TreeNode leaf(const std::string& id, const Proposition& p, std::mt19937_64& rng) {
    TreeNode n;
    n.id = id;
    n.belief = Belief(p, {random_partner(rng)}, id);
    return n;
}

Proposition random_atom(std::mt19937_64& rng) {
    Proposition p = atom(static_cast<int>(rng() % 9));
    return rng() % 4 == 0 ? negate(p) : p;
}

void collect(const DiscourseAct& a, std::set<std::string>& into) {
    for (const auto& p : a.propositions) into.insert(p.str());
    for (const auto& p : a.pursues) into.insert(p.str());
    if (a.relation) into.insert(a.relation->str());
}

}  // namespace

SessionRun random_session(std::uint64_t seed, int free_replies, std::size_t max_steps) {
    std::mt19937_64 rng(seed * 7919 + 17);
    InstanceShape shape;
    shape.atoms = 9;
    Instance inst = random_instance(seed, shape);
    Session s("random", inst.kb);
    SessionRun run;
    run.seed = seed;

    auto check = [&](const char* where) {
        run.max_depth = std::max(run.max_depth, s.model().depth());
        if (s.model().depth() > s.config().max_depth)
            run.violation = std::string("depth overflow after ") + where;
        else if (s.concluded() && s.model().depth() != 0)
            run.violation = std::string("open frames after conclusion, ") + where;
        else if (!s.concluded() && s.model().depth() == 0)
            run.violation = std::string("nothing open while awaiting a reply, ") + where;
    };

    s.apply(UserInput::propose(inst.tree));
    check("proposal");
    int replies = 0;
    for (std::size_t step = 0; step < max_steps && !s.concluded() && run.violation.empty(); ++step) {
        const Frame& top = s.model().stack.back();
        std::vector<Proposition> raised;
        for (const auto& a : s.model().acts)
            if (a.speaker == Speaker::system && a.action_id == top.action.id)
                for (const auto& p : a.propositions) raised.push_back(p);
        if (raised.empty()) raised.push_back(top.focus.proposition);

        UserInput in = UserInput::accept();
        if (replies < free_replies) {
            const std::string id = "r" + std::to_string(step);
            switch (rng() % 6) {
                case 0:
                case 1: break;
                case 2:
                case 3:
                    in = UserInput::reject_with_counter(raised[rng() % raised.size()],
                                                        ProposedBeliefTree::build({leaf(id, random_atom(rng), rng)}, id));
                    break;
                case 4: {
                    const Proposition& f = top.focus.proposition;
                    TreeNode root = leaf(id, f, rng);
                    Proposition c = random_atom(rng);
                    if (c.atom() == f.atom()) c = atom(9);
                    TreeNode child = leaf(id + "c", c, rng);
                    child.relation = EvidenceRelation(c, f, {random_partner(rng)});
                    root.children = {child.id};
                    in = UserInput::provide_support(ProposedBeliefTree::build({root, child}, id));
                    break;
                }
                default:
                    in = UserInput::counter_proposal(random_instance(seed * 31 + step, shape).tree);
                    break;
            }
        }
        ++replies;
        try {
            s.apply(in);
        } catch (const Error&) {
            ++run.rejected_inputs;
            s.apply(UserInput::accept());
        }
        check("reply");
    }

    std::set<std::string> props;
    for (const auto& a : s.model().acts) collect(a, props);
    run.concluded = s.concluded();
    run.turns = s.turns().size();
    for (const auto& t : s.turns()) run.exchanges += t.speaker == Speaker::user;
    run.in_play = props.size();
    return run;
}

}  // namespace parley::testing
