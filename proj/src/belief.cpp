#include "parley/belief.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "parley/error.hpp"
#include "parley/evaluation.hpp"

namespace parley {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::parse_error: return "parse-error";
        case ErrorCode::validation_error: return "validation-error";
        case ErrorCode::malformed_tree: return "malformed-tree";
        case ErrorCode::malformed_response: return "malformed-response";
        case ErrorCode::impossible_combination: return "impossible-combination";
        case ErrorCode::not_unsure: return "not-unsure";
        case ErrorCode::applicability_violation: return "applicability-violation";
        case ErrorCode::session_concluded: return "session-concluded";
        case ErrorCode::no_open_action: return "no-open-action";
        case ErrorCode::preconditions_still_open: return "preconditions-still-open";
        case ErrorCode::missing_template: return "missing-template";
        case ErrorCode::unknown_format: return "unknown-format";
        case ErrorCode::unknown_scenario: return "unknown-scenario";
        case ErrorCode::unknown_session: return "unknown-session";
    }
    return "error";
}

namespace {

bool valid_term(std::string_view t) {
    if (t.empty()) return false;
    return std::all_of(t.begin(), t.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '\'';
    });
}

}  // namespace

Proposition::Proposition(std::string predicate, std::vector<std::string> args, Polarity polarity)
    : predicate_(std::move(predicate)), args_(std::move(args)), polarity_(polarity) {
    if (!valid_term(predicate_) || predicate_ == kSupportsPredicate)
        throw Error(ErrorCode::validation_error, "bad predicate '" + predicate_ + "'");
    for (const auto& a : args_)
        if (!valid_term(a)) throw Error(ErrorCode::validation_error, "bad term '" + a + "'");
    render();
}

Proposition Proposition::supports(const Proposition& child, const Proposition& parent, Polarity polarity) {
    if (child.empty() || parent.empty())
        throw Error(ErrorCode::validation_error, "supports() needs two propositions");
    Proposition p;
    p.predicate_ = std::string(kSupportsPredicate);
    p.polarity_ = polarity;
    p.link_ = std::make_shared<const std::pair<Proposition, Proposition>>(child, parent);
    p.render();
    return p;
}

const Proposition& Proposition::child() const {
    if (!link_) throw std::logic_error("child() on non-support proposition " + text_);
    return link_->first;
}

const Proposition& Proposition::parent() const {
    if (!link_) throw std::logic_error("parent() on non-support proposition " + text_);
    return link_->second;
}

Proposition Proposition::atom() const { return with_polarity(Polarity::positive); }

Proposition Proposition::with_polarity(Polarity polarity) const {
    if (polarity == polarity_) return *this;
    Proposition p = *this;
    p.polarity_ = polarity;
    p.render();
    return p;
}

void Proposition::render() {
    std::string out = positive() ? "" : "~";
    out += predicate_;
    out += '(';
    if (link_) {
        out += link_->first.str();
        out += ',';
        out += link_->second.str();
    } else {
        for (std::size_t i = 0; i < args_.size(); ++i) {
            if (i) out += ',';
            out += args_[i];
        }
    }
    out += ')';
    text_ = std::move(out);
}

Proposition negate(const Proposition& p) {
    return p.with_polarity(p.positive() ? Polarity::negative : Polarity::positive);
}

namespace {

class PropositionParser {
public:
    explicit PropositionParser(std::string_view s) : s_(s) {}

    Proposition parse_all() {
        Proposition p = parse();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return p;
    }

private:
    Proposition parse() {
        skip_ws();
        Polarity pol = Polarity::positive;
        while (pos_ < s_.size() && (s_[pos_] == '~' || s_[pos_] == '!')) {
            pol = pol == Polarity::positive ? Polarity::negative : Polarity::positive;
            ++pos_;
            skip_ws();
        }
        std::string name = term();
        skip_ws();
        std::vector<std::string> args;
        if (pos_ < s_.size() && s_[pos_] == '(') {
            ++pos_;
            if (name == kSupportsPredicate) {
                Proposition child = parse();
                expect(',');
                Proposition parent = parse();
                expect(')');
                return Proposition::supports(child, parent, pol);
            }
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ')') {
                ++pos_;
            } else {
                while (true) {
                    skip_ws();
                    args.push_back(term());
                    skip_ws();
                    if (pos_ < s_.size() && s_[pos_] == ',') {
                        ++pos_;
                        continue;
                    }
                    expect(')');
                    break;
                }
            }
        }
        if (name == kSupportsPredicate) fail("supports needs two arguments");
        return Proposition(std::move(name), std::move(args), pol);
    }

    std::string term() {
        std::size_t start = pos_;
        while (pos_ < s_.size()) {
            unsigned char c = s_[pos_];
            if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '\'') {
                ++pos_;
            } else {
                break;
            }
        }
        if (start == pos_) fail("expected a term");
        return std::string(s_.substr(start, pos_ - start));
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::parse_error,
                    what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Proposition parse_proposition(std::string_view text) {
    try {
        return PropositionParser(text).parse_all();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::validation_error) throw Error(ErrorCode::parse_error, e.what());
        throw;
    }
}

Strength strength_from_rank(int r) {
    if (r <= 1) return Strength::weak;
    if (r == 2) return Strength::strong;
    return Strength::warranted;
}

std::string_view to_string(Strength s) {
    switch (s) {
        case Strength::weak: return "weak";
        case Strength::strong: return "strong";
        case Strength::warranted: return "warranted";
    }
    return "weak";
}

Strength parse_strength(std::string_view t) {
    if (t == "weak") return Strength::weak;
    if (t == "strong") return Strength::strong;
    if (t == "warranted") return Strength::warranted;
    throw Error(ErrorCode::validation_error, "bad strength '" + std::string(t) + "'");
}

std::string_view to_string(Source s) {
    switch (s) {
        case Source::own_knowledge: return "own-knowledge";
        case Source::stereotype: return "stereotype";
        case Source::partner_statement: return "partner-statement";
        case Source::derived: return "derived";
    }
    return "own-knowledge";
}

std::string_view to_string(SemanticForm f) {
    switch (f) {
        case SemanticForm::direct_assertion: return "direct-assertion";
        case SemanticForm::hedged: return "hedged";
        case SemanticForm::tag_question: return "tag-question";
        case SemanticForm::none: return "none";
    }
    return "none";
}

std::string_view to_string(Expertise e) {
    switch (e) {
        case Expertise::novice: return "novice";
        case Expertise::apprentice: return "apprentice";
        case Expertise::expert: return "expert";
        case Expertise::not_applicable: return "n/a";
    }
    return "n/a";
}

Source parse_source(std::string_view t) {
    if (t == "own-knowledge") return Source::own_knowledge;
    if (t == "stereotype") return Source::stereotype;
    if (t == "partner-statement") return Source::partner_statement;
    if (t == "derived") return Source::derived;
    throw Error(ErrorCode::validation_error, "bad endorsement source '" + std::string(t) + "'");
}

SemanticForm parse_semantic_form(std::string_view t) {
    if (t == "direct-assertion") return SemanticForm::direct_assertion;
    if (t == "hedged") return SemanticForm::hedged;
    if (t == "tag-question") return SemanticForm::tag_question;
    if (t == "none") return SemanticForm::none;
    throw Error(ErrorCode::validation_error, "bad semantic form '" + std::string(t) + "'");
}

Expertise parse_expertise(std::string_view t) {
    if (t == "novice") return Expertise::novice;
    if (t == "apprentice") return Expertise::apprentice;
    if (t == "expert") return Expertise::expert;
    if (t == "n/a") return Expertise::not_applicable;
    throw Error(ErrorCode::validation_error, "bad expertise '" + std::string(t) + "'");
}

Endorsement Endorsement::own(Strength s) {
    Endorsement e;
    e.source = Source::own_knowledge;
    e.authored = s;
    return e;
}

Endorsement Endorsement::stereotype() {
    Endorsement e;
    e.source = Source::stereotype;
    return e;
}

Endorsement Endorsement::partner(SemanticForm form, Expertise expertise) {
    Endorsement e;
    e.source = Source::partner_statement;
    e.form = form;
    e.expertise = expertise;
    return e;
}

Endorsement Endorsement::derived(std::vector<Strength> premises) {
    Endorsement e;
    e.source = Source::derived;
    e.premises = std::move(premises);
    return e;
}

void validate(const Endorsement& e) {
    const bool partner = e.source == Source::partner_statement;
    if (partner != (e.form != SemanticForm::none))
        throw Error(ErrorCode::validation_error, "semantic form must be set exactly for partner statements");
    if (partner != (e.expertise != Expertise::not_applicable))
        throw Error(ErrorCode::validation_error, "expertise must be set exactly for partner statements");
    if (e.source == Source::own_knowledge && !e.authored)
        throw Error(ErrorCode::validation_error, "own-knowledge endorsement needs an authored strength");
    if (e.source == Source::derived && e.premises.empty())
        throw Error(ErrorCode::validation_error, "derived endorsement needs premises");
}

namespace {

Strength strongest(const std::vector<Endorsement>& es) {
    if (es.empty()) throw Error(ErrorCode::validation_error, "belief without endorsements");
    Strength best = Strength::weak;
    for (const auto& e : es) {
        validate(e);
        best = std::max(best, endorsement_strength(e));
    }
    return best;
}

}  // namespace

Belief::Belief(Proposition p, std::vector<Endorsement> es, std::string id_)
    : proposition(std::move(p)), strength(strongest(es)), endorsements(std::move(es)), id(std::move(id_)) {}

EvidenceRelation::EvidenceRelation(Proposition c, Proposition p, std::vector<Endorsement> es)
    : child(std::move(c)), parent(std::move(p)), strength(strongest(es)), endorsements(std::move(es)) {
    if (child == parent) throw Error(ErrorCode::validation_error, "relation child equals parent: " + child.str());
}

ProposedBeliefTree ProposedBeliefTree::build(std::vector<TreeNode> nodes, const std::string& root) {
    ProposedBeliefTree t;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id.empty()) throw Error(ErrorCode::malformed_tree, "node without id");
        if (!t.index_.emplace(nodes[i].id, i).second)
            throw Error(ErrorCode::malformed_tree, "duplicate node id '" + nodes[i].id + "'");
        nodes[i].parent.clear();
    }
    if (!t.index_.contains(root)) throw Error(ErrorCode::malformed_tree, "root '" + root + "' not found");

    for (auto& n : nodes) {
        for (const auto& c : n.children) {
            auto it = t.index_.find(c);
            if (it == t.index_.end())
                throw Error(ErrorCode::malformed_tree, "unknown child '" + c + "' of '" + n.id + "'");
            auto& child = nodes[it->second];
            if (!child.parent.empty() || c == root)
                throw Error(ErrorCode::malformed_tree, "node '" + c + "' has more than one parent or cycles");
            child.parent = n.id;
        }
    }

    // Every node must be reachable from the root; this also rules out cycles
    // detached from the root.
    std::set<std::string> seen;
    std::vector<std::string> stack{root};
    while (!stack.empty()) {
        std::string id = stack.back();
        stack.pop_back();
        if (!seen.insert(id).second) throw Error(ErrorCode::malformed_tree, "cycle through '" + id + "'");
        for (const auto& c : nodes[t.index_.at(id)].children) stack.push_back(c);
    }
    if (seen.size() != nodes.size()) throw Error(ErrorCode::malformed_tree, "unreachable or cyclic nodes");

    for (const auto& n : nodes) {
        if (n.belief.proposition.empty()) throw Error(ErrorCode::malformed_tree, "node '" + n.id + "' has no claim");
        if (n.id == root) {
            if (n.relation) throw Error(ErrorCode::malformed_tree, "root carries a relation");
            continue;
        }
        if (!n.relation) throw Error(ErrorCode::malformed_tree, "node '" + n.id + "' has no relation");
        const auto& parent_prop = nodes[t.index_.at(n.parent)].belief.proposition;
        if (n.relation->child != n.belief.proposition)
            throw Error(ErrorCode::malformed_tree, "relation child mismatch at '" + n.id + "'");
        if (n.relation->parent != parent_prop && n.relation->parent != negate(parent_prop))
            throw Error(ErrorCode::malformed_tree, "relation parent mismatch at '" + n.id + "'");
    }

    t.nodes_ = std::move(nodes);
    t.root_ = root;
    return t;
}

const TreeNode& ProposedBeliefTree::node(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::malformed_tree, "no node '" + id + "'");
    return nodes_[it->second];
}

std::size_t ProposedBeliefTree::order(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::malformed_tree, "no node '" + id + "'");
    return it->second;
}

ProposedBeliefTree ProposedBeliefTree::graft(const std::string& at, const ProposedBeliefTree& sub,
                                             const std::string& prefix) const {
    std::vector<TreeNode> nodes = nodes_;
    const auto& anchor = node(at);
    const auto& sub_root = sub.node(sub.root());
    const bool merge_root = sub_root.belief.proposition == anchor.belief.proposition;

    auto rename = [&](const std::string& id) { return prefix + id; };
    std::vector<std::string> attach;
    for (const auto& n : sub.nodes()) {
        if (merge_root && n.id == sub.root()) {
            for (const auto& c : n.children) attach.push_back(rename(c));
            continue;
        }
        TreeNode copy = n;
        copy.id = rename(n.id);
        for (auto& c : copy.children) c = rename(c);
        if (n.id == sub.root()) {
            copy.relation = EvidenceRelation(n.belief.proposition, anchor.belief.proposition,
                                             n.belief.endorsements);
            attach.push_back(copy.id);
        }
        nodes.push_back(std::move(copy));
    }
    auto& target = nodes[order(at)];
    target.children.insert(target.children.end(), attach.begin(), attach.end());
    return build(std::move(nodes), root_);
}

std::string ProposedBeliefTree::canonical() const {
    std::function<std::string(const std::string&)> walk = [&](const std::string& id) {
        const auto& n = node(id);
        std::string out = n.belief.proposition.str();
        if (n.relation) out = "[" + n.relation->parent.str() + "]" + out;
        if (!n.children.empty()) {
            std::vector<std::string> parts;
            for (const auto& c : n.children) parts.push_back(walk(c));
            std::sort(parts.begin(), parts.end());
            out += "{";
            for (const auto& p : parts) out += p + ";";
            out += "}";
        }
        return out;
    };
    return root_.empty() ? std::string() : walk(root_);
}

void KnowledgeBase::add_belief(Belief b) {
    Proposition key = b.proposition.atom();
    beliefs_.insert_or_assign(key, std::move(b));
}

void KnowledgeBase::add_relation(const EvidenceRelation& r) {
    add_belief(Belief(r.claim(), r.endorsements));
}

bool KnowledgeBase::retract(const Proposition& p) {
    auto it = beliefs_.find(p.atom());
    if (it == beliefs_.end() || it->second.proposition != p) return false;
    beliefs_.erase(it);
    return true;
}

std::optional<BeliefLookup> KnowledgeBase::lookup(const Proposition& p) const {
    auto it = beliefs_.find(p.atom());
    if (it == beliefs_.end()) return std::nullopt;
    return BeliefLookup{it->second, it->second.proposition != p};
}

bool KnowledgeBase::believes(const Proposition& p) const {
    auto it = beliefs_.find(p.atom());
    return it != beliefs_.end() && it->second.proposition == p;
}

std::vector<Belief> KnowledgeBase::beliefs() const {
    std::vector<Belief> out;
    out.reserve(beliefs_.size());
    for (const auto& [k, b] : beliefs_) out.push_back(b);
    return out;
}

std::vector<EvidenceRelation> KnowledgeBase::relations() const {
    std::vector<EvidenceRelation> out;
    for (const auto& [k, b] : beliefs_) {
        if (!b.proposition.is_support() || !b.proposition.positive()) continue;
        out.emplace_back(b.proposition.child(), b.proposition.parent(), b.endorsements);
    }
    return out;
}

std::vector<EvidenceRelation> KnowledgeBase::relations_into(const Proposition& p) const {
    std::vector<EvidenceRelation> out;
    const Proposition atom = p.atom();
    for (const auto& [k, b] : beliefs_) {
        if (!b.proposition.is_support() || !b.proposition.positive()) continue;
        if (b.proposition.parent().atom() != atom) continue;
        out.emplace_back(b.proposition.child(), b.proposition.parent(), b.endorsements);
    }
    return out;
}

void KnowledgeBase::record_partner_support(const Proposition& p, std::vector<Proposition> support) {
    for (auto& r : partner_) {
        if (r.proposition != p) continue;
        if (!r.support) r.support.emplace();
        for (auto& s : support)
            if (std::find(r.support->begin(), r.support->end(), s) == r.support->end()) r.support->push_back(s);
        return;
    }
    partner_.push_back(PartnerRecord{p, std::move(support)});
}

std::optional<std::vector<Proposition>> KnowledgeBase::partner_support(const Proposition& p) const {
    for (const auto& r : partner_)
        if (r.proposition == p) return r.support;
    return std::nullopt;
}

void KnowledgeBase::concede(const Proposition& p) {
    concessions_.erase(negate(p));
    concessions_.insert(p);
}

bool KnowledgeBase::conceded(const Proposition& p) const { return concessions_.contains(p); }

void KnowledgeBase::set_topic(const std::string& predicate, const std::string& topic) {
    topics_[predicate] = topic;
}

std::string KnowledgeBase::topic_of(const Proposition& p) const {
    if (p.is_support()) return topic_of(p.child());
    auto it = topics_.find(p.predicate());
    return it == topics_.end() ? std::string() : it->second;
}

void KnowledgeBase::set_expertise(const std::string& topic, Expertise level) { expertise_[topic] = level; }

Expertise KnowledgeBase::expertise(const std::string& topic) const {
    auto it = expertise_.find(topic);
    return it == expertise_.end() ? Expertise::apprentice : it->second;
}

void KnowledgeBase::add_mutual(const Proposition& p) {
    mutual_.erase(negate(p));
    mutual_.insert(p);
}

std::optional<BeliefLookup> kb_lookup(const KnowledgeBase& kb, const Proposition& p) { return kb.lookup(p); }

std::optional<std::vector<Proposition>> knowref_support(const KnowledgeBase& kb, const Proposition& p) {
    return kb.partner_support(p);
}

}  // namespace parley
