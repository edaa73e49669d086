#include "parley/strategy.hpp"

#include <algorithm>
#include <cctype>

#include "parley/error.hpp"

namespace parley {

std::string_view to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::invite_attack: return "InviteAttack";
        case StrategyKind::ask_why: return "AskWhy";
        case StrategyKind::ask_why_with_counter: return "AskWhyWithCounter";
        case StrategyKind::express_uncertainty: return "ExpressUncertainty";
    }
    return "AskWhy";
}

StrategyKind parse_strategy_kind(std::string_view t) {
    if (t == "InviteAttack") return StrategyKind::invite_attack;
    if (t == "AskWhy") return StrategyKind::ask_why;
    if (t == "AskWhyWithCounter") return StrategyKind::ask_why_with_counter;
    if (t == "ExpressUncertainty") return StrategyKind::express_uncertainty;
    throw Error(ErrorCode::validation_error, "unknown strategy '" + std::string(t) + "'");
}

std::string_view to_string(ActionStatus s) {
    switch (s) {
        case ActionStatus::pending: return "pending";
        case ActionStatus::preconditions_open: return "preconditions-open";
        case ActionStatus::executable: return "executable";
        case ActionStatus::done: return "done";
        case ActionStatus::abandoned: return "abandoned";
    }
    return "pending";
}

std::vector<EvidenceItem> counterevidence_for(const EvaluationAnnotation& focus) {
    std::vector<EvidenceItem> out;
    for (const auto& item : focus.evidence)
        if (item.from_kb() && item.attacks(focus.proposition)) out.push_back(item);
    return out;
}

namespace {

bool same_item(const EvidenceItem& a, const EvidenceItem& b) {
    return a.child.proposition == b.child.proposition && a.relation.claim() == b.relation.claim() &&
           a.child_node == b.child_node;
}

std::vector<EvidenceItem> lower_items(const EvaluationAnnotation& focus) {
    std::vector<std::size_t> all(focus.potential.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return resolve_items(focus.proposition, focus.evidence, focus.potential, all, TriState::reject);
}

// Strongest item, earliest on ties.
const EvidenceItem* strongest(const std::vector<EvidenceItem>& items) {
    const EvidenceItem* best = nullptr;
    for (const auto& item : items)
        if (!best || rank(item.effective) > rank(best->effective)) best = &item;
    return best;
}

}  // namespace

bool is_critical(const EvidenceItem& item, const EvaluationAnnotation& focus, const EvaluationConfig& config) {
    if (!item.attacks(focus.proposition)) return false;
    auto items = lower_items(focus);
    auto it = std::find_if(items.begin(), items.end(), [&](const EvidenceItem& x) { return same_item(x, item); });
    if (it != items.end()) items.erase(it);
    return evaluate(focus.proposition, items, focus.base, config).result == TriState::accept;
}

StrategyChoice select_strategy(const EvaluationAnnotation& focus, const KnowledgeBase& kb,
                               const EvaluationConfig& config) {
    const auto counters = counterevidence_for(focus);
    std::vector<EvidenceItem> critical;
    std::vector<EvidenceItem> other;
    for (const auto& c : counters) (is_critical(c, focus, config) ? critical : other).push_back(c);

    StrategyChoice choice;
    if (!critical.empty()) {
        choice.kind = StrategyKind::invite_attack;
        choice.counterevidence = *strongest(critical);
        return choice;
    }
    const bool knows_support = kb.partner_support(focus.proposition).has_value();
    if (!knows_support) {
        choice.kind = other.empty() ? StrategyKind::ask_why : StrategyKind::ask_why_with_counter;
    } else {
        choice.kind = StrategyKind::express_uncertainty;
    }
    if (!other.empty()) choice.counterevidence = *strongest(other);
    return choice;
}

// --- conditions ----------------------------------------------------------------

std::string_view to_string(ConditionKind k) {
    switch (k) {
        case ConditionKind::believe: return "believe";
        case ConditionKind::uncertain: return "uncertain";
        case ConditionKind::mutual: return "MB";
        case ConditionKind::knowref: return "knowref";
        case ConditionKind::supports: return "supports";
        case ConditionKind::results_in: return "results-in";
        case ConditionKind::member_of: return "member-of";
        case ConditionKind::root_of: return "root-of";
        case ConditionKind::annotation_changed: return "annotation-changed";
    }
    return "believe";
}

namespace {

ConditionKind parse_condition_kind(std::string_view t) {
    for (auto k : {ConditionKind::believe, ConditionKind::uncertain, ConditionKind::mutual, ConditionKind::knowref,
                   ConditionKind::supports, ConditionKind::results_in, ConditionKind::member_of,
                   ConditionKind::root_of, ConditionKind::annotation_changed}) {
        if (to_string(k) == t) return k;
    }
    throw Error(ErrorCode::parse_error, "unknown condition '" + std::string(t) + "'");
}

class ConditionParser {
public:
    explicit ConditionParser(std::string_view s) : s_(s) {}

    Disjunction parse() {
        Disjunction d;
        skip();
        if (pos_ == s_.size()) return d;
        d.push_back(conj());
        while (peek('|')) {
            ++pos_;
            d.push_back(conj());
        }
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return d;
    }

private:
    Conjunction conj() {
        Conjunction c{literal()};
        while (peek('&')) {
            ++pos_;
            c.push_back(literal());
        }
        return c;
    }

    Condition literal() {
        Condition c;
        while (peek('!')) {
            ++pos_;
            c.negated = !c.negated;
        }
        c.kind = parse_condition_kind(name());
        expect('(');
        c.args.push_back(term());
        while (peek(',')) {
            ++pos_;
            c.args.push_back(term());
        }
        expect(')');
        return c;
    }

    Term term() {
        Term t;
        while (peek('~')) {
            ++pos_;
            t.negated = !t.negated;
        }
        if (peek('*')) {
            ++pos_;
            t.kind = Term::Kind::wildcard;
            return t;
        }
        std::string n = name();
        if (n == "supports") {
            expect('(');
            Term a = term();
            expect(',');
            Term b = term();
            expect(')');
            t.kind = Term::Kind::supports;
            t.parts = std::make_shared<const std::pair<Term, Term>>(std::move(a), std::move(b));
            return t;
        }
        t.kind = Term::Kind::variable;
        t.name = std::move(n);
        return t;
    }

    std::string name() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size()) {
            unsigned char c = s_[pos_];
            if (std::isalnum(c) || c == '_' || c == '-') {
                ++pos_;
            } else {
                break;
            }
        }
        if (start == pos_) fail("expected a name");
        return std::string(s_.substr(start, pos_ - start));
    }

    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::parse_error,
                    what + " at offset " + std::to_string(pos_) + " in condition '" + std::string(s_) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Disjunction parse_conditions(std::string_view text) { return ConditionParser(text).parse(); }

std::string to_string(const Term& t) {
    std::string out = t.negated ? "~" : "";
    switch (t.kind) {
        case Term::Kind::variable: return out + t.name;
        case Term::Kind::wildcard: return out + "*";
        case Term::Kind::supports:
            return out + "supports(" + to_string(t.parts->first) + "," + to_string(t.parts->second) + ")";
    }
    return out;
}

std::string to_string(const Condition& c) {
    std::string out = c.negated ? "!" : "";
    out += to_string(c.kind);
    out += '(';
    for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i) out += ',';
        out += to_string(c.args[i]);
    }
    return out + ")";
}

std::string to_string(const Disjunction& d) {
    std::string out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) out += " | ";
        for (std::size_t j = 0; j < d[i].size(); ++j) {
            if (j) out += " & ";
            out += to_string(d[i][j]);
        }
    }
    return out;
}

std::optional<Proposition> bind(const Term& t, const Binding& b) {
    std::optional<Proposition> p;
    switch (t.kind) {
        case Term::Kind::wildcard: return std::nullopt;
        case Term::Kind::variable: {
            auto it = b.vars.find(t.name);
            if (it == b.vars.end()) return std::nullopt;
            p = it->second;
            break;
        }
        case Term::Kind::supports: {
            auto child = bind(t.parts->first, b);
            auto parent = bind(t.parts->second, b);
            if (!child || !parent) return std::nullopt;
            p = Proposition::supports(*child, *parent);
            break;
        }
    }
    if (t.negated) p = negate(*p);
    return p;
}

namespace {

std::optional<bool> evaluate_literal(const Condition& c, const Binding& b, const KnowledgeBase& kb,
                                     const ChangeProbe& probe) {
    auto arg = [&](std::size_t i) -> std::optional<Proposition> {
        if (i >= c.args.size()) return std::nullopt;
        return bind(c.args[i], b);
    };
    switch (c.kind) {
        case ConditionKind::believe: {
            auto x = arg(0);
            if (!x) return std::nullopt;
            return kb.believes(*x);
        }
        case ConditionKind::uncertain: {
            auto x = arg(0);
            if (!x) return std::nullopt;
            return b.uncertain.contains(*x);
        }
        case ConditionKind::mutual: {
            auto x = arg(0);
            if (!x) return std::nullopt;
            return kb.mutual(*x);
        }
        case ConditionKind::knowref: {
            if (c.args.empty()) return std::nullopt;
            const Term& t = c.args[0];
            if (t.kind == Term::Kind::supports && t.parts->first.kind == Term::Kind::wildcard) {
                // Does the system itself know some evidence for the target?
                auto target = bind(t.parts->second, b);
                if (!target) return std::nullopt;
                auto bel1 = b.vars.find("_bel1");
                if (bel1 != b.vars.end() && *target == negate(bel1->second)) return !b.counter_children.empty();
                for (const auto& r : kb.relations_into(*target))
                    if (r.parent == *target && kb.believes(r.child)) return true;
                return false;
            }
            auto x = arg(0);
            if (!x) return std::nullopt;
            return kb.partner_support(*x).has_value();
        }
        case ConditionKind::supports: {
            auto x = arg(0);
            auto y = arg(1);
            if (!x || !y) return std::nullopt;
            return kb.believes(Proposition::supports(*x, *y));
        }
        case ConditionKind::results_in: {
            auto x = arg(0);
            auto y = arg(1);
            if (!x || !y) return std::nullopt;
            return b.results_in.contains({*x, *y});
        }
        case ConditionKind::member_of: {
            auto x = arg(0);
            if (!x) return std::nullopt;
            return b.tree_members.contains(*x);
        }
        case ConditionKind::root_of: {
            auto x = arg(1);
            auto top = b.vars.find("_top");
            if (!x || top == b.vars.end()) return std::nullopt;
            return top->second == *x;
        }
        case ConditionKind::annotation_changed: {
            auto x = arg(0);
            if (!x) return std::nullopt;
            return probe ? probe(*x) : false;
        }
    }
    return std::nullopt;
}

}  // namespace

bool holds(const Condition& c, const Binding& b, const KnowledgeBase& kb, const ChangeProbe& probe) {
    auto v = evaluate_literal(c, b, kb, probe);
    // A literal over an unbound variable can never be established.
    if (!v) return false;
    return *v != c.negated;
}

bool holds(const Conjunction& c, const Binding& b, const KnowledgeBase& kb, const ChangeProbe& probe) {
    return std::all_of(c.begin(), c.end(), [&](const Condition& x) { return holds(x, b, kb, probe); });
}

namespace {

bool holds_any(const Disjunction& d, const Binding& b, const KnowledgeBase& kb) {
    if (d.empty()) return true;
    return std::any_of(d.begin(), d.end(), [&](const Conjunction& c) { return holds(c, b, kb); });
}

Recipe make_recipe(std::string name, StrategyKind kind, std::string_view appl, std::string_view pre) {
    Recipe r;
    r.name = std::move(name);
    r.strategy = kind;
    r.applicability = parse_conditions(appl);
    r.constraints = parse_conditions("member-of(_bel1,_tree) & root-of(_tree,_top)");
    r.preconditions = parse_conditions(pre);
    r.body = {"Evaluate-Proposed-Beliefs(_top)"};
    r.goals = parse_conditions("believe(_top) | believe(~_top)");
    return r;
}

constexpr std::string_view kInviteAttackPre =
    "MB(_bel2) & MB(supports(_bel2,~_bel1)) | MB(~_bel2) | MB(~supports(_bel2,~_bel1))";

}  // namespace

std::vector<Recipe> builtin_recipes() {
    return {
        make_recipe("Reevaluate-After-Invite-Attack", StrategyKind::invite_attack,
                    "uncertain(_bel1) & believe(_bel2) & believe(supports(_bel2,~_bel1)) & "
                    "results-in(~_bel2,_bel1)",
                    kInviteAttackPre),
        make_recipe("Reevaluate-After-Ask-Why", StrategyKind::ask_why,
                    "!knowref(_bel1) & !knowref(supports(*,~_bel1))", "knowref(_bel1)"),
        make_recipe("Reevaluate-After-Ask-Why-With-Counter", StrategyKind::ask_why_with_counter,
                    "uncertain(_bel1) & !knowref(_bel1) & believe(_bel2) & believe(supports(_bel2,~_bel1)) & "
                    "!results-in(~_bel2,_bel1)",
                    "knowref(_bel1) | " + std::string(kInviteAttackPre)),
        make_recipe("Reevaluate-After-Express-Uncertainty", StrategyKind::express_uncertainty,
                    "uncertain(_bel1) & knowref(_bel1)", "annotation-changed(_bel1)"),
    };
}

RecipeBook::RecipeBook() {
    for (auto& r : builtin_recipes()) put(std::move(r));
}

void RecipeBook::put(Recipe r) { by_strategy_.insert_or_assign(r.strategy, std::move(r)); }

const Recipe& RecipeBook::for_strategy(StrategyKind k) const {
    auto it = by_strategy_.find(k);
    if (it == by_strategy_.end()) throw Error(ErrorCode::validation_error, "no recipe for strategy");
    return it->second;
}

std::vector<Recipe> RecipeBook::all() const {
    std::vector<Recipe> out;
    for (const auto& [k, r] : by_strategy_) out.push_back(r);
    return out;
}

std::vector<std::vector<std::string>> ActionInstance::bound_preconditions() const {
    std::vector<std::vector<std::string>> out;
    for (const auto& conj : preconditions) {
        std::vector<std::string> lits;
        for (const auto& c : conj) {
            std::string s = c.negated ? "!" : "";
            s += to_string(c.kind);
            s += '(';
            for (std::size_t i = 0; i < c.args.size(); ++i) {
                if (i) s += ',';
                auto p = bind(c.args[i], binding);
                s += p ? p->str() : to_string(c.args[i]);
            }
            s += ')';
            lits.push_back(std::move(s));
        }
        out.push_back(std::move(lits));
    }
    return out;
}

ActionInstance instantiate_recipe(const RecipeBook& book, const StrategyChoice& choice,
                                  const InstantiationContext& ctx, int id) {
    const Recipe& recipe = book.for_strategy(choice.kind);
    const Proposition& focus = ctx.focus.proposition;

    ActionInstance a;
    a.id = id;
    a.name = recipe.name;
    a.strategy = recipe.strategy;
    a.applicability = recipe.applicability;
    a.constraints = recipe.constraints;
    a.preconditions = recipe.preconditions;
    a.body = recipe.body;
    a.goals = recipe.goals;

    Binding& b = a.binding;
    b.vars["_bel1"] = focus;
    b.vars["_top"] = ctx.tree.node(ctx.tree.root()).belief.proposition;
    b.tree_id = ctx.tree_id;
    if (ctx.focus.status() == TriState::unsure) b.uncertain.insert(focus);
    for (const auto& n : ctx.tree.nodes()) {
        b.tree_members.insert(n.belief.proposition);
        if (n.relation) b.tree_members.insert(n.relation->claim());
    }
    for (const auto& c : counterevidence_for(ctx.focus)) {
        b.counter_children.insert(c.child.proposition);
        if (is_critical(c, ctx.focus, ctx.config)) b.results_in.insert({negate(c.child.proposition), focus});
    }
    if (choice.counterevidence) b.vars["_bel2"] = choice.counterevidence->child.proposition;

    a.parameters = {"_s1=system", "_s2=user", "_bel1=" + focus.str(), "_top-belief=" + b.vars["_top"].str(),
                    "_belief-tree=" + ctx.tree_id};
    if (choice.counterevidence) a.parameters.push_back("_bel2=" + b.vars["_bel2"].str());

    for (const auto* section : {&a.applicability, &a.constraints}) {
        if (holds_any(*section, b, ctx.kb)) continue;
        std::string failing;
        for (const auto& conj : *section)
            for (const auto& c : conj)
                if (!holds(c, b, ctx.kb)) failing += (failing.empty() ? "" : ", ") + to_string(c);
        throw Error(ErrorCode::applicability_violation, recipe.name + " on " + focus.str() + ": " + failing);
    }
    a.status = check_preconditions(a, ctx.kb) ? ActionStatus::executable : ActionStatus::preconditions_open;
    return a;
}

std::optional<std::size_t> check_preconditions(const ActionInstance& a, const KnowledgeBase& kb,
                                               const ChangeProbe& probe) {
    for (std::size_t i = 0; i < a.preconditions.size(); ++i)
        if (holds(a.preconditions[i], a.binding, kb, probe)) return i;
    return std::nullopt;
}

}  // namespace parley
