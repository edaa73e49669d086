#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace parley {

enum class Polarity { positive, negative };

/// A ground atom such as Teaches(Smith,Logic), or an evidential claim
/// supports(child,parent), either of which may be negated.
///
/// Identity is structural. Every proposition keeps its canonical text form,
/// so comparisons are string comparisons.
class Proposition {
public:
    Proposition() = default;
    Proposition(std::string predicate, std::vector<std::string> args,
                Polarity polarity = Polarity::positive);

    static Proposition supports(const Proposition& child, const Proposition& parent,
                                Polarity polarity = Polarity::positive);

    const std::string& predicate() const { return predicate_; }
    const std::vector<std::string>& args() const { return args_; }
    Polarity polarity() const { return polarity_; }
    bool positive() const { return polarity_ == Polarity::positive; }

    bool is_support() const { return link_ != nullptr; }
    // Only valid when is_support().
    const Proposition& child() const;
    const Proposition& parent() const;

    // Same proposition with positive polarity.
    Proposition atom() const;
    Proposition with_polarity(Polarity polarity) const;

    const std::string& str() const { return text_; }
    bool empty() const { return text_.empty(); }

    friend bool operator==(const Proposition& a, const Proposition& b) { return a.text_ == b.text_; }
    friend std::strong_ordering operator<=>(const Proposition& a, const Proposition& b) {
        return a.text_ <=> b.text_;
    }

private:
    void render();

    std::string predicate_;
    std::vector<std::string> args_;
    Polarity polarity_ = Polarity::positive;
    std::shared_ptr<const std::pair<Proposition, Proposition>> link_;
    std::string text_;
};

Proposition negate(const Proposition& p);

// Text syntax: Pred(a,b), ~Pred(a,b), supports(Pred(a),~Other(b)).
Proposition parse_proposition(std::string_view text);

inline constexpr std::string_view kSupportsPredicate = "supports";

enum class Strength { weak = 1, strong = 2, warranted = 3 };

inline int rank(Strength s) { return static_cast<int>(s); }
Strength strength_from_rank(int rank);
std::string_view to_string(Strength s);
Strength parse_strength(std::string_view text);

enum class Source { own_knowledge, stereotype, partner_statement, derived };
enum class SemanticForm { direct_assertion, hedged, tag_question, none };
enum class Expertise { novice, apprentice, expert, not_applicable };

std::string_view to_string(Source s);
std::string_view to_string(SemanticForm f);
std::string_view to_string(Expertise e);
Source parse_source(std::string_view text);
SemanticForm parse_semantic_form(std::string_view text);
Expertise parse_expertise(std::string_view text);

struct Endorsement {
    Source source = Source::own_knowledge;
    SemanticForm form = SemanticForm::none;
    Expertise expertise = Expertise::not_applicable;
    // own-knowledge carries an authored strength; derived carries its premises.
    std::optional<Strength> authored;
    std::vector<Strength> premises;

    static Endorsement own(Strength s);
    static Endorsement stereotype();
    static Endorsement partner(SemanticForm form, Expertise expertise);
    static Endorsement derived(std::vector<Strength> premises);

    friend bool operator==(const Endorsement&, const Endorsement&) = default;
};

// Throws validation_error when the source/form/expertise combination is illegal.
void validate(const Endorsement& e);

struct Belief {
    Proposition proposition;
    Strength strength = Strength::weak;
    std::vector<Endorsement> endorsements;
    std::string id;

    Belief() = default;
    // Strength is the strongest of the endorsements.
    Belief(Proposition p, std::vector<Endorsement> endorsements, std::string id = {});

    friend bool operator==(const Belief&, const Belief&) = default;
};

/// supports(child, parent). Counterevidence is stored with parent = negate(p).
struct EvidenceRelation {
    Proposition child;
    Proposition parent;
    Strength strength = Strength::weak;
    std::vector<Endorsement> endorsements;

    EvidenceRelation() = default;
    EvidenceRelation(Proposition child, Proposition parent, std::vector<Endorsement> endorsements);

    Proposition claim() const { return Proposition::supports(child, parent); }

    friend bool operator==(const EvidenceRelation&, const EvidenceRelation&) = default;
};

struct TreeNode {
    std::string id;
    Belief belief;
    std::optional<EvidenceRelation> relation;  // absent on the root only
    std::vector<std::string> children;
    std::string parent;                         // empty on the root

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class ProposedBeliefTree {
public:
    ProposedBeliefTree() = default;

    // Validates shape and relation endpoints; throws malformed_tree.
    // `nodes` fixes proposal order. The parent field is recomputed.
    static ProposedBeliefTree build(std::vector<TreeNode> nodes, const std::string& root);

    const std::string& root() const { return root_; }
    const TreeNode& node(const std::string& id) const;
    bool contains(const std::string& id) const { return index_.contains(id); }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    // Position in proposal order.
    std::size_t order(const std::string& id) const;

    // Attaches `subtree` below node `at`. If the subtree root states the same
    // proposition as `at`, only its children are attached. Ids are prefixed
    // to stay unique.
    ProposedBeliefTree graft(const std::string& at, const ProposedBeliefTree& subtree,
                             const std::string& id_prefix) const;

    // Canonical structural text, used by the no-repeat rule.
    std::string canonical() const;

    friend bool operator==(const ProposedBeliefTree& a, const ProposedBeliefTree& b) {
        return a.root_ == b.root_ && a.nodes_ == b.nodes_;
    }

private:
    std::vector<TreeNode> nodes_;
    std::map<std::string, std::size_t> index_;
    std::string root_;
};

struct BeliefLookup {
    Belief belief;
    bool negated = false;  // true when the held belief is about negate(p)
};

struct PartnerRecord {
    Proposition proposition;
    std::optional<std::vector<Proposition>> support;
};

class KnowledgeBase {
public:
    // Replaces any belief about the same atom, including its negation.
    void add_belief(Belief b);
    void add_relation(const EvidenceRelation& r);
    bool retract(const Proposition& p);

    std::optional<BeliefLookup> lookup(const Proposition& p) const;
    // Holds p with the same polarity.
    bool believes(const Proposition& p) const;
    std::vector<Belief> beliefs() const;
    // Held positive supports(...) beliefs, as relations.
    std::vector<EvidenceRelation> relations() const;
    // Held relations whose parent is p or negate(p).
    std::vector<EvidenceRelation> relations_into(const Proposition& p) const;

    void record_partner_support(const Proposition& p, std::vector<Proposition> support);
    std::optional<std::vector<Proposition>> partner_support(const Proposition& p) const;
    const std::vector<PartnerRecord>& partner_model() const { return partner_; }

    // The partner gave up p (and now holds negate(p)).
    void concede(const Proposition& p);
    bool conceded(const Proposition& p) const;
    const std::set<Proposition>& concessions() const { return concessions_; }

    void set_topic(const std::string& predicate, const std::string& topic);
    std::string topic_of(const Proposition& p) const;
    void set_expertise(const std::string& topic, Expertise level);
    Expertise expertise(const std::string& topic) const;
    Expertise expertise_for(const Proposition& p) const { return expertise(topic_of(p)); }
    const std::map<std::string, Expertise>& expertise_map() const { return expertise_; }
    const std::map<std::string, std::string>& topics() const { return topics_; }

    // Adds p to the shared store, retracting negate(p) if it was there.
    void add_mutual(const Proposition& p);
    bool mutual(const Proposition& p) const { return mutual_.contains(p); }
    const std::set<Proposition>& mutual_beliefs() const { return mutual_; }

private:
    std::map<Proposition, Belief> beliefs_;  // keyed by atom()
    std::vector<PartnerRecord> partner_;
    std::set<Proposition> concessions_;
    std::map<std::string, std::string> topics_;
    std::map<std::string, Expertise> expertise_;
    std::set<Proposition> mutual_;
};

std::optional<BeliefLookup> kb_lookup(const KnowledgeBase& kb, const Proposition& p);
std::optional<std::vector<Proposition>> knowref_support(const KnowledgeBase& kb, const Proposition& p);

}  // namespace parley
