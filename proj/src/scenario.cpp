#include "parley/scenario.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "parley/error.hpp"

namespace parley {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::validation_error, what); }

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) invalid(where + ": missing '" + key + "'");
    return j.at(key);
}

std::string need_string(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_string()) invalid(where + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

Proposition claim(const json& j, const Declarations& decls, const std::string& where) {
    if (!j.is_string()) invalid(where + ": claim must be a string");
    Proposition p = parse_proposition(j.get<std::string>());
    validate_proposition(p, decls);
    return p;
}

Endorsement endorsement_from_json(const json& j, const std::string& where) {
    Endorsement e;
    e.source = parse_source(need_string(j, "source", where));
    switch (e.source) {
        case Source::own_knowledge: e.authored = parse_strength(need_string(j, "strength", where)); break;
        case Source::stereotype: break;
        case Source::partner_statement:
            e.form = parse_semantic_form(need_string(j, "form", where));
            e.expertise = parse_expertise(need_string(j, "expertise", where));
            break;
        case Source::derived:
            for (const auto& s : need(j, "premises", where)) e.premises.push_back(parse_strength(s.get<std::string>()));
            break;
    }
    validate(e);
    return e;
}

// Either {"strength": ...} (own knowledge), {"source": "stereotype"}, or an
// explicit endorsement list.
std::vector<Endorsement> endorsements_from_json(const json& j, const std::string& where) {
    if (j.contains("endorsements")) {
        std::vector<Endorsement> out;
        for (const auto& e : j.at("endorsements")) out.push_back(endorsement_from_json(e, where));
        if (out.empty()) invalid(where + ": empty endorsement list");
        return out;
    }
    if (j.contains("source") && j.at("source") == "stereotype") return {Endorsement::stereotype()};
    return {Endorsement::own(parse_strength(need_string(j, "strength", where)))};
}

json endorsements_to_json(const std::vector<Endorsement>& es) {
    if (es.size() == 1 && es[0].source == Source::own_knowledge)
        return json{{"strength", std::string(to_string(*es[0].authored))}};
    if (es.size() == 1 && es[0].source == Source::stereotype) return json{{"source", "stereotype"}};
    json arr = json::array();
    for (const auto& e : es) arr.push_back(to_json(e));
    return json{{"endorsements", arr}};
}

Endorsement partner_endorsement(const json& j, const Proposition& p, const KnowledgeBase& kb,
                                const std::string& where, SemanticForm fallback) {
    SemanticForm form = j.contains("form") ? parse_semantic_form(j.at("form").get<std::string>()) : fallback;
    if (form == SemanticForm::none) invalid(where + ": statement without a form");
    Expertise ex = j.contains("expertise") ? parse_expertise(j.at("expertise").get<std::string>()) : kb.expertise_for(p);
    return Endorsement::partner(form, ex);
}

struct RawNode {
    TreeNode node;
    json relation;
};

}  // namespace

void validate_proposition(const Proposition& p, const Declarations& decls) {
    if (decls.empty()) return;
    if (p.is_support()) {
        validate_proposition(p.child(), decls);
        validate_proposition(p.parent(), decls);
        return;
    }
    auto it = decls.find(p.predicate());
    if (it == decls.end()) invalid("undeclared predicate '" + p.predicate() + "' in " + p.str());
    if (static_cast<int>(p.args().size()) != it->second.arity)
        invalid("arity mismatch for " + p.predicate() + ": declared " + std::to_string(it->second.arity) + ", used " +
                std::to_string(p.args().size()) + " in " + p.str());
}

ProposedBeliefTree tree_from_json(const json& j, const KnowledgeBase& kb, const Declarations& decls) {
    if (!j.is_object()) throw Error(ErrorCode::malformed_tree, "tree must be an object");
    std::vector<RawNode> raw;
    std::string root;
    try {
        if (j.contains("nodes")) {
            root = need_string(j, "root", "tree");
            for (const auto& n : j.at("nodes")) {
                RawNode r;
                r.node.id = need_string(n, "id", "tree node");
                const std::string where = "node " + r.node.id;
                Proposition p = claim(need(n, "claim", where), decls, where);
                r.node.belief = Belief(p, {partner_endorsement(n, p, kb, where, SemanticForm::none)}, r.node.id);
                if (n.contains("children"))
                    for (const auto& c : n.at("children")) r.node.children.push_back(c.get<std::string>());
                r.relation = n.contains("relation") ? n.at("relation") : json::object();
                raw.push_back(std::move(r));
            }
        } else {
            // Nested form: rebuild child lists from the recursion order.
            int counter = 0;
            std::vector<RawNode> flat;
            std::function<std::string(const json&)> walk = [&](const json& n) -> std::string {
                RawNode r;
                r.node.id = n.contains("id") ? n.at("id").get<std::string>() : "n" + std::to_string(++counter);
                const std::string where = "node " + r.node.id;
                Proposition p = claim(need(n, "claim", where), decls, where);
                r.node.belief = Belief(p, {partner_endorsement(n, p, kb, where, SemanticForm::none)}, r.node.id);
                r.relation = n.contains("relation") ? n.at("relation") : json::object();
                flat.push_back(std::move(r));
                const std::size_t self = flat.size() - 1;
                if (n.contains("children")) {
                    for (const auto& c : n.at("children")) {
                        if (!c.is_object())
                            throw Error(ErrorCode::malformed_tree, where + ": nested children must be objects");
                        std::string cid = walk(c);
                        flat[self].node.children.push_back(cid);
                    }
                }
                return flat[self].node.id;
            };
            root = walk(j);
            raw = std::move(flat);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::malformed_tree, e.what());
    }

    std::map<std::string, const RawNode*> by_id;
    for (const auto& r : raw) by_id[r.node.id] = &r;
    std::map<std::string, std::string> parent_of;
    for (const auto& r : raw)
        for (const auto& c : r.node.children) parent_of[c] = r.node.id;

    std::vector<TreeNode> nodes;
    for (const auto& r : raw) {
        TreeNode n = r.node;
        auto pit = parent_of.find(n.id);
        if (pit != parent_of.end() && n.id != root) {
            auto parent_raw = by_id.find(pit->second);
            const Proposition& parent_p = parent_raw->second->node.belief.proposition;
            const bool attacks = r.relation.value("attacks", false);
            const Proposition target = attacks ? negate(parent_p) : parent_p;
            const Proposition rel = Proposition::supports(n.belief.proposition, target);
            const SemanticForm fallback = n.belief.endorsements.front().form;
            n.relation = EvidenceRelation(n.belief.proposition, target,
                                          {partner_endorsement(r.relation, rel, kb, "relation of " + n.id, fallback)});
        }
        nodes.push_back(std::move(n));
    }
    return ProposedBeliefTree::build(std::move(nodes), root);
}

json to_json(const ProposedBeliefTree& t) {
    std::function<json(const std::string&)> node = [&](const std::string& id) {
        const TreeNode& n = t.node(id);
        const Endorsement& e = n.belief.endorsements.front();
        json j{{"id", n.id}, {"claim", n.belief.proposition.str()}};
        if (e.source == Source::partner_statement) {
            j["form"] = std::string(to_string(e.form));
            j["expertise"] = std::string(to_string(e.expertise));
        }
        if (n.relation) {
            json r = json::object();
            const Endorsement& re = n.relation->endorsements.front();
            if (re.source == Source::partner_statement) {
                r["form"] = std::string(to_string(re.form));
                r["expertise"] = std::string(to_string(re.expertise));
            }
            if (!n.parent.empty() && n.relation->parent != t.node(n.parent).belief.proposition) r["attacks"] = true;
            j["relation"] = r;
        }
        if (!n.children.empty()) {
            json kids = json::array();
            for (const auto& c : n.children) kids.push_back(node(c));
            j["children"] = kids;
        }
        return j;
    };
    return node(t.root());
}

UserInput input_from_json(const json& j, const KnowledgeBase& kb, const Declarations& decls) {
    if (!j.is_object()) throw Error(ErrorCode::malformed_response, "reply must be an object");
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw Error(ErrorCode::malformed_response, "reply needs a string 'kind'");
    UserInput in;
    in.kind = parse_input_kind(j.at("kind").get<std::string>());
    if (in.kind != InputKind::accept) {
        if (!j.contains("tree"))
            throw Error(ErrorCode::malformed_response, std::string(to_string(in.kind)) + " needs a tree");
        in.tree = tree_from_json(j.at("tree"), kb, decls);
    }
    if (in.kind == InputKind::reject_with_counter) {
        if (!j.contains("target") || !j.at("target").is_string())
            throw Error(ErrorCode::malformed_response, "reject-with-counter needs a target claim");
        try {
            in.target = claim(j.at("target"), decls, "target");
        } catch (const Error& e) {
            throw Error(ErrorCode::malformed_response, e.what());
        }
    }
    return in;
}

json to_json(const UserInput& in) {
    json j{{"kind", std::string(to_string(in.kind))}};
    if (in.target) j["target"] = in.target->str();
    if (in.tree) j["tree"] = to_json(*in.tree);
    return j;
}

// --- scenario --------------------------------------------------------------------

KnowledgeBase Scenario::knowledge_base() const {
    KnowledgeBase kb;
    for (const auto& p : predicates) kb.set_topic(p.name, p.topic);
    for (const auto& [topic, level] : user_expertise) kb.set_expertise(topic, level);
    for (const auto& b : beliefs) kb.add_belief(b);
    for (const auto& r : relations) kb.add_relation(r);
    for (const auto& pr : partner_model) {
        if (pr.support)
            kb.record_partner_support(pr.proposition, *pr.support);
        else
            kb.record_partner_support(pr.proposition, {});
    }
    return kb;
}

EngineConfig Scenario::engine() const {
    EngineConfig cfg;
    cfg.evaluation = thresholds;
    cfg.max_depth = max_depth;
    for (const auto& r : recipes) cfg.recipes.put(r);
    for (const auto& [k, v] : templates) cfg.templates[k] = v;
    return cfg;
}

std::vector<UserInput> Scenario::script_for(const std::string& branch) const {
    std::vector<UserInput> out = script.common;
    const std::string& name = branch.empty() ? default_branch : branch;
    if (name.empty()) return out;
    auto it = script.branches.find(name);
    if (it == script.branches.end()) invalid("scenario " + this->name + " has no branch '" + name + "'");
    out.insert(out.end(), it->second.begin(), it->second.end());
    return out;
}

Session make_session(const Scenario& s, std::string id) { return Session(std::move(id), s.knowledge_base(), s.engine()); }

Scenario load_scenario(std::string_view bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse_error, e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "scenario must be a JSON object");

    Scenario s;
    try {
        s.name = need_string(j, "name", "scenario");
        s.description = j.value("description", "");
        s.notes = j.value("notes", json());

        Declarations decls;
        for (const auto& p : need(j, "predicates", "scenario")) {
            PredicateDecl d;
            d.name = need_string(p, "name", "predicate");
            d.arity = need(p, "arity", "predicate " + d.name).get<int>();
            d.topic = p.value("topic", "");
            if (d.name == kSupportsPredicate) invalid("'supports' is reserved");
            if (d.arity < 0) invalid("negative arity for " + d.name);
            if (!decls.emplace(d.name, d).second) invalid("predicate " + d.name + " declared twice");
            s.predicates.push_back(d);
        }
        if (j.contains("agents") && j.at("agents").contains("user")) {
            const json& u = j.at("agents").at("user");
            if (u.contains("expertise"))
                for (const auto& [topic, level] : u.at("expertise").items())
                    s.user_expertise[topic] = parse_expertise(level.get<std::string>());
        }

        const json kbj = j.value("system_kb", json::object());
        if (kbj.contains("beliefs")) {
            for (const auto& b : kbj.at("beliefs")) {
                const std::string id = b.value("id", "");
                const std::string where = "belief " + id;
                Proposition p = claim(need(b, "claim", where), decls, where);
                s.beliefs.emplace_back(p, endorsements_from_json(b, where), id);
            }
        }
        if (kbj.contains("relations")) {
            for (const auto& r : kbj.at("relations")) {
                const std::string where = "relation " + r.value("id", std::string());
                Proposition child = claim(need(r, "child", where), decls, where);
                Proposition parent = claim(need(r, "parent", where), decls, where);
                s.relations.emplace_back(child, parent, endorsements_from_json(r, where));
            }
        }
        for (const auto& pm : j.value("partner_model", json::array())) {
            PartnerRecord rec;
            rec.proposition = claim(need(pm, "claim", "partner model"), decls, "partner model");
            if (pm.contains("support")) {
                rec.support.emplace();
                for (const auto& c : pm.at("support")) rec.support->push_back(claim(c, decls, "partner model"));
            }
            s.partner_model.push_back(std::move(rec));
        }
        for (const auto& rj : j.value("recipes", json::array())) {
            Recipe r;
            r.strategy = parse_strategy_kind(need_string(rj, "strategy", "recipe"));
            const Recipe& base = RecipeBook().for_strategy(r.strategy);
            r.name = rj.value("name", base.name);
            auto cond = [&](const char* key, const Disjunction& fallback) {
                return rj.contains(key) ? parse_conditions(rj.at(key).get<std::string>()) : fallback;
            };
            r.applicability = cond("applicability", base.applicability);
            r.constraints = cond("constraints", base.constraints);
            r.preconditions = cond("preconditions", base.preconditions);
            r.goals = cond("goals", base.goals);
            r.body = rj.contains("body") ? rj.at("body").get<std::vector<std::string>>() : base.body;
            s.recipes.push_back(std::move(r));
        }
        const json templates = j.value("templates", json::object());
        for (const auto& [k, v] : templates.items()) s.templates[k] = v.get<std::string>();
        const json th = j.value("thresholds", json::object());
        s.thresholds.accept_margin = th.value("accept_margin", 2);
        s.thresholds.reject_margin = th.value("reject_margin", 2);
        s.max_depth = th.value("max_depth", std::size_t{8});
        if (s.thresholds.accept_margin < 1 || s.thresholds.reject_margin < 1)
            invalid("thresholds must be positive");

        const KnowledgeBase kb = s.knowledge_base();
        if (j.contains("script")) {
            const json& sc = j.at("script");
            const json common = sc.value("common", json::array());
            const json branches = sc.value("branches", json::object());
            for (const auto& t : common) s.script.common.push_back(input_from_json(t, kb, decls));
            for (const auto& [name, turns] : branches.items()) {
                auto& list = s.script.branches[name];
                for (const auto& t : turns) list.push_back(input_from_json(t, kb, decls));
            }
        }
        s.default_branch = j.value("default_branch", "");
        if (!s.default_branch.empty() && !s.script.branches.contains(s.default_branch))
            invalid("default branch '" + s.default_branch + "' is not defined");
    } catch (const json::exception& e) {
        invalid(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::validation_error) throw;
        // A bad claim or tree inside a scenario file is a content problem.
        throw Error(ErrorCode::validation_error, e.what());
    }
    return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::parse_error, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

json export_scenario(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["description"] = s.description;
    if (!s.notes.is_null()) j["notes"] = s.notes;
    json preds = json::array();
    for (const auto& p : s.predicates) preds.push_back({{"name", p.name}, {"arity", p.arity}, {"topic", p.topic}});
    j["predicates"] = preds;
    json ex = json::object();
    for (const auto& [t, l] : s.user_expertise) ex[t] = std::string(to_string(l));
    j["agents"] = {{"user", {{"expertise", ex}}}};

    json beliefs = json::array();
    for (const auto& b : s.beliefs) {
        json bj = endorsements_to_json(b.endorsements);
        bj["claim"] = b.proposition.str();
        if (!b.id.empty()) bj["id"] = b.id;
        beliefs.push_back(bj);
    }
    json relations = json::array();
    for (const auto& r : s.relations) {
        json rj = endorsements_to_json(r.endorsements);
        rj["child"] = r.child.str();
        rj["parent"] = r.parent.str();
        relations.push_back(rj);
    }
    j["system_kb"] = {{"beliefs", beliefs}, {"relations", relations}};

    json pm = json::array();
    for (const auto& rec : s.partner_model) {
        json e{{"claim", rec.proposition.str()}};
        if (rec.support) {
            json sup = json::array();
            for (const auto& p : *rec.support) sup.push_back(p.str());
            e["support"] = sup;
        }
        pm.push_back(e);
    }
    j["partner_model"] = pm;

    json recipes = json::array();
    for (const auto& r : s.recipes) {
        recipes.push_back({{"strategy", std::string(to_string(r.strategy))},
                           {"name", r.name},
                           {"applicability", to_string(r.applicability)},
                           {"constraints", to_string(r.constraints)},
                           {"preconditions", to_string(r.preconditions)},
                           {"body", r.body},
                           {"goals", to_string(r.goals)}});
    }
    j["recipes"] = recipes;
    json templates = json::object();
    for (const auto& [k, v] : s.templates) templates[k] = v;
    j["templates"] = templates;
    j["thresholds"] = {{"accept_margin", s.thresholds.accept_margin},
                       {"reject_margin", s.thresholds.reject_margin},
                       {"max_depth", s.max_depth}};

    json common = json::array();
    for (const auto& in : s.script.common) common.push_back(to_json(in));
    json branches = json::object();
    for (const auto& [name, turns] : s.script.branches) {
        json list = json::array();
        for (const auto& in : turns) list.push_back(to_json(in));
        branches[name] = list;
    }
    j["script"] = {{"common", common}, {"branches", branches}};
    j["default_branch"] = s.default_branch;
    return j;
}

// --- annotations and trace -------------------------------------------------------

json to_json(const Endorsement& e) {
    json j{{"source", std::string(to_string(e.source))}};
    if (e.source == Source::partner_statement) {
        j["form"] = std::string(to_string(e.form));
        j["expertise"] = std::string(to_string(e.expertise));
    }
    if (e.authored) j["strength"] = std::string(to_string(*e.authored));
    if (!e.premises.empty()) {
        json p = json::array();
        for (auto s : e.premises) p.push_back(std::string(to_string(s)));
        j["premises"] = p;
    }
    return j;
}

json to_json(const Belief& b) {
    json es = json::array();
    for (const auto& e : b.endorsements) es.push_back(to_json(e));
    return {{"claim", b.proposition.str()}, {"strength", std::string(to_string(b.strength))}, {"endorsements", es}};
}

json to_json(const EvidenceItem& item) {
    json j{{"child", item.child.proposition.str()},
           {"relation", item.relation.claim().str()},
           {"status", std::string(to_string(item.status))},
           {"effective", std::string(to_string(item.effective))},
           {"child_strength", std::string(to_string(item.child.strength))},
           {"relation_strength", std::string(to_string(item.relation.strength))},
           {"from_kb", item.from_kb()}};
    if (!item.from_kb()) {
        j["child_node"] = item.child_node;
        j["child_margin"] = item.child_margin;
        j["relation_margin"] = item.relation_margin;
    }
    return j;
}

json to_json(const EvaluationAnnotation& a) {
    json base = json::array();
    for (const auto& b : a.base)
        base.push_back({{"claim", b.proposition.str()}, {"strength", std::string(to_string(b.strength))}});
    json ev = json::array();
    for (const auto& i : a.evidence) ev.push_back(to_json(i));
    json pot = json::array();
    for (const auto& i : a.potential) pot.push_back(to_json(i));
    return {{"proposition", a.proposition.str()},
            {"upper", std::string(to_string(a.upper))},
            {"lower", std::string(to_string(a.lower))},
            {"status", std::string(to_string(a.status()))},
            {"support", a.support},
            {"attack", a.attack},
            {"upper_support", a.upper_support},
            {"upper_attack", a.upper_attack},
            {"held", std::string(to_string(a.held))},
            {"base", base},
            {"evidence", ev},
            {"potential", pot}};
}

json to_json(const TreeEvaluation& e) {
    json j = json::object();
    for (const auto& [id, n] : e.nodes) {
        json nj{{"belief", to_json(n.belief)}};
        if (n.relation) nj["relation"] = to_json(*n.relation);
        j[id] = nj;
    }
    return j;
}

json to_json(const BoundsCase& c) { return {{"case", c.number}, {"action", std::string(to_string(c.action))}}; }

json to_json(const FocusSet& f) {
    json members = json::array();
    for (const auto& m : f.members)
        members.push_back({{"node", m.node}, {"relation", m.relation}, {"proposition", m.proposition.str()}});
    json cands = json::array();
    for (const auto& c : f.candidates)
        cands.push_back({{"direction", c.direction == Direction::to_accept ? "accept" : "reject"},
                         {"items", c.items},
                         {"closeness", c.closeness},
                         {"result", std::string(to_string(c.result))}});
    return {{"members", members},           {"rationale", std::string(to_string(f.rationale))},
            {"accept_set", f.accept_set},   {"reject_set", f.reject_set},
            {"candidates", cands},          {"fallback", f.fallback}};
}

json to_json(const StrategyChoice& c) {
    json j{{"kind", std::string(to_string(c.kind))}};
    if (c.counterevidence) j["counterevidence"] = to_json(*c.counterevidence);
    return j;
}

json to_json(const ActionInstance& a) {
    return {{"id", a.id},
            {"name", a.name},
            {"strategy", std::string(to_string(a.strategy))},
            {"parameters", a.parameters},
            {"applicability", to_string(a.applicability)},
            {"constraints", to_string(a.constraints)},
            {"preconditions", a.bound_preconditions()},
            {"body", a.body},
            {"goals", to_string(a.goals)},
            {"status", std::string(to_string(a.status))}};
}

json to_json(const DiscourseAct& a) {
    json props = json::array();
    for (const auto& p : a.propositions) props.push_back(p.str());
    json strengths = json::array();
    for (auto s : a.strengths) strengths.push_back(std::string(to_string(s)));
    json pursues = json::array();
    for (const auto& p : a.pursues) pursues.push_back(p.str());
    json j{{"id", a.id},
           {"turn", a.turn},
           {"kind", std::string(to_string(a.kind))},
           {"speaker", std::string(to_string(a.speaker))},
           {"propositions", props},
           {"strengths", strengths},
           {"surface", a.surface},
           {"pursues", pursues},
           {"status", std::string(to_string(a.status))}};
    if (a.relation) j["relation"] = {{"claim", a.relation->str()}, {"implicit", a.relation_implicit}};
    if (a.form != SemanticForm::none) j["form"] = std::string(to_string(a.form));
    if (a.action_id) j["action"] = *a.action_id;
    if (a.disjunct) j["disjunct"] = *a.disjunct;
    return j;
}

json to_json(const TraceEntry& e) {
    json j{{"turn", e.turn}, {"event", e.event}, {"depth", e.depth}};
    if (e.record) j["record"] = *e.record;
    if (e.root) j["root"] = *e.root;
    if (e.evaluation) j["evaluation"] = to_json(*e.evaluation);
    if (e.bounds_case) j["case"] = to_json(*e.bounds_case);
    if (e.focus) j["focus"] = to_json(*e.focus);
    if (e.strategy) j["strategy"] = to_json(*e.strategy);
    if (e.action) j["action"] = *e.action;
    if (e.disjunct) j["disjunct"] = *e.disjunct;
    if (!e.note.empty()) j["note"] = e.note;
    return j;
}

namespace {

json turns_json(const Session& s) {
    json turns = json::array();
    for (const auto& t : s.turns()) {
        json acts = json::array();
        for (int id : t.acts) acts.push_back(to_json(s.model().acts.at(id - 1)));
        turns.push_back({{"index", t.index},
                         {"speaker", std::string(to_string(t.speaker))},
                         {"timestamp", t.timestamp},
                         {"acts", acts}});
    }
    return turns;
}

json mutual_json(const KnowledgeBase& kb) {
    json m = json::array();
    for (const auto& p : kb.mutual_beliefs()) m.push_back(p.str());
    return m;
}

}  // namespace

json session_state(const Session& s) {
    const DialogueModel& m = s.model();
    json domain = json::array();
    json problem = json::array();
    for (const auto& d : m.domain) {
        json e{{"name", d.name}, {"note", d.note}};
        (d.level == "domain" ? domain : problem).push_back(e);
    }
    json stack = json::array();
    for (std::size_t i = 0; i < m.stack.size(); ++i) {
        const Frame& f = m.stack[i];
        json a = to_json(f.action);
        a["record"] = f.record;
        a["focus"] = {{"node", f.focus.node}, {"relation", f.focus.relation}, {"proposition", f.focus.proposition.str()}};
        a["satisfied"] = s.disjunct_status(i);
        stack.push_back(a);
    }
    json closed = json::array();
    for (const auto& a : m.closed) closed.push_back(to_json(a));
    json records = json::array();
    for (const auto& r : m.records) {
        json rj{{"id", r.id},
                {"tree_id", r.tree_id},
                {"tree", to_json(r.tree)},
                {"origin", std::string(to_string(r.origin))},
                {"depth", r.depth}};
        if (r.target) rj["target"] = r.target->str();
        if (r.parent_action) rj["parent_action"] = *r.parent_action;
        if (r.evaluation) rj["evaluation"] = to_json(*r.evaluation);
        if (r.bounds_case) rj["case"] = to_json(*r.bounds_case);
        if (r.focus) rj["focus"] = to_json(*r.focus);
        if (r.outcome) rj["outcome"] = std::string(to_string(*r.outcome));
        records.push_back(rj);
    }
    json acts = json::array();
    for (const auto& a : m.acts) acts.push_back(to_json(a));
    return {{"session", s.id()},
            {"phase", std::string(to_string(s.phase()))},
            {"depth", m.depth()},
            {"levels",
             {{"domain", domain},
              {"problem_solving", {{"stubs", problem}, {"stack", stack}, {"closed", closed}}},
              {"belief", records},
              {"discourse", acts}}},
            {"mutual_beliefs", mutual_json(s.kb())},
            {"transcript", turns_json(s)}};
}

std::string export_transcript(const Session& s, std::string_view format, const std::string& scenario) {
    if (format == "full-trace") {
        json inputs = json::array();
        for (const auto& in : s.inputs()) inputs.push_back(to_json(in));
        json trace = json::array();
        for (const auto& e : s.trace()) trace.push_back(to_json(e));
        json j{{"schema", std::string(kTraceSchema)},
               {"session", s.id()},
               {"scenario", scenario},
               {"phase", std::string(to_string(s.phase()))},
               {"inputs", inputs},
               {"turns", turns_json(s)},
               {"trace", trace},
               {"mutual_beliefs", mutual_json(s.kb())}};
        return j.dump(2) + "\n";
    }
    if (format == "acts-only") {
        json acts = json::array();
        for (const auto& a : s.model().acts) acts.push_back(to_json(a));
        json j{{"schema", std::string(kTraceSchema)}, {"acts", acts}};
        return j.dump(2) + "\n";
    }
    if (format == "text-only") {
        std::string out;
        for (const auto& a : s.model().acts) {
            out += a.speaker == Speaker::user ? "U: " : "S: ";
            out += a.surface;
            out += '\n';
        }
        return out;
    }
    throw Error(ErrorCode::unknown_format, "unknown transcript format '" + std::string(format) + "'");
}

Session replay(const Scenario& scenario, const json& full_trace, std::string id) {
    if (full_trace.value("schema", "") != kTraceSchema)
        throw Error(ErrorCode::parse_error, "not a " + std::string(kTraceSchema) + " document");
    Session s = make_session(scenario, std::move(id));
    const KnowledgeBase kb = scenario.knowledge_base();
    for (const auto& in : full_trace.at("inputs")) s.apply(input_from_json(in, kb));
    return s;
}

}  // namespace parley
