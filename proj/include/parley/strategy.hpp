#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parley/evaluation.hpp"

namespace parley {

enum class StrategyKind { invite_attack, ask_why, ask_why_with_counter, express_uncertainty };

std::string_view to_string(StrategyKind k);
StrategyKind parse_strategy_kind(std::string_view text);

struct StrategyChoice {
    StrategyKind kind = StrategyKind::ask_why;
    std::optional<EvidenceItem> counterevidence;
};

/// The system's own evidence against the annotated belief, in evaluation order.
std::vector<EvidenceItem> counterevidence_for(const EvaluationAnnotation& focus);

/// True iff dropping `item` from the attack side of the focus's current
/// evidence makes the focus accepted.
bool is_critical(const EvidenceItem& item, const EvaluationAnnotation& focus, const EvaluationConfig& config = {});

StrategyChoice select_strategy(const EvaluationAnnotation& focus, const KnowledgeBase& kb,
                               const EvaluationConfig& config = {});

// --- recipe conditions -------------------------------------------------------

/// Template term: a recipe variable (_bel1, _bel2, _top, _tree), the wildcard
/// `*`, or supports(term,term); any of them may be negated with `~`.
struct Term {
    enum class Kind { variable, wildcard, supports };
    Kind kind = Kind::variable;
    std::string name;
    bool negated = false;
    std::shared_ptr<const std::pair<Term, Term>> parts;
};

enum class ConditionKind {
    believe,
    uncertain,
    mutual,
    knowref,
    supports,
    results_in,
    member_of,
    root_of,
    annotation_changed,
};

std::string_view to_string(ConditionKind k);

struct Condition {
    ConditionKind kind = ConditionKind::believe;
    bool negated = false;
    std::vector<Term> args;
};

using Conjunction = std::vector<Condition>;
using Disjunction = std::vector<Conjunction>;

// Grammar: conj ('|' conj)*, conj := lit ('&' lit)*, lit := ['!'] name '(' terms ')'.
Disjunction parse_conditions(std::string_view text);
std::string to_string(const Term& t);
std::string to_string(const Condition& c);
std::string to_string(const Disjunction& d);

/// Facts fixed when an action is instantiated.
struct Binding {
    std::map<std::string, Proposition> vars;
    std::set<Proposition> uncertain;
    std::set<std::pair<Proposition, Proposition>> results_in;
    std::set<Proposition> tree_members;
    // Children of the system's own evidence against _bel1, as the evaluator saw it.
    std::set<Proposition> counter_children;
    std::string tree_id;
};

std::optional<Proposition> bind(const Term& t, const Binding& b);

/// Re-evaluates a bound belief against the current dialogue state and reports
/// whether its annotation moved since the action was opened.
using ChangeProbe = std::function<bool(const Proposition&)>;

bool holds(const Condition& c, const Binding& b, const KnowledgeBase& kb, const ChangeProbe& probe = {});
bool holds(const Conjunction& c, const Binding& b, const KnowledgeBase& kb, const ChangeProbe& probe = {});

struct Recipe {
    std::string name;
    StrategyKind strategy = StrategyKind::ask_why;
    Disjunction applicability;
    Disjunction constraints;
    Disjunction preconditions;
    std::vector<std::string> body;
    Disjunction goals;
};

std::vector<Recipe> builtin_recipes();

class RecipeBook {
public:
    RecipeBook();
    // Replaces the recipe registered for the same strategy.
    void put(Recipe r);
    const Recipe& for_strategy(StrategyKind k) const;
    std::vector<Recipe> all() const;

private:
    std::map<StrategyKind, Recipe> by_strategy_;
};

enum class ActionStatus { pending, preconditions_open, executable, done, abandoned };

std::string_view to_string(ActionStatus s);

struct ActionInstance {
    int id = 0;
    std::string name;
    StrategyKind strategy = StrategyKind::ask_why;
    std::vector<std::string> parameters;
    Binding binding;
    Disjunction applicability;
    Disjunction constraints;
    Disjunction preconditions;
    std::vector<std::string> body;
    Disjunction goals;
    ActionStatus status = ActionStatus::pending;

    // Preconditions with variables replaced, one string per literal.
    std::vector<std::vector<std::string>> bound_preconditions() const;
};

struct InstantiationContext {
    const ProposedBeliefTree& tree;
    std::string tree_id;
    const EvaluationAnnotation& focus;
    const KnowledgeBase& kb;
    EvaluationConfig config;
};

/// Binds the recipe chosen for `choice` to the focus and the tree root.
/// Throws applicability_violation when an applicability condition or
/// constraint fails.
ActionInstance instantiate_recipe(const RecipeBook& book, const StrategyChoice& choice,
                                  const InstantiationContext& ctx, int id = 0);

std::optional<std::size_t> check_preconditions(const ActionInstance& a, const KnowledgeBase& kb,
                                               const ChangeProbe& probe = {});

}  // namespace parley
