#include "parley/gateway.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <httplib.h>

namespace parley {

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::unknown_session:
        case ErrorCode::unknown_scenario: return 404;
        case ErrorCode::parse_error:
        case ErrorCode::validation_error:
        case ErrorCode::malformed_tree:
        case ErrorCode::malformed_response: return 422;
        case ErrorCode::session_concluded:
        case ErrorCode::no_open_action:
        case ErrorCode::preconditions_still_open: return 409;
        case ErrorCode::unknown_format: return 400;
        default: return 500;
    }
}

namespace {

Declarations declarations(const Scenario& s) {
    Declarations d;
    for (const auto& p : s.predicates) d[p.name] = p;
    return d;
}

json delta(const Session& s) {
    json m = json::array();
    for (const auto& p : s.kb().mutual_beliefs()) m.push_back(p.str());
    json open = json::array();
    for (std::size_t i = 0; i < s.model().stack.size(); ++i) {
        const auto& f = s.model().stack[i];
        open.push_back({{"action", f.action.id}, {"name", f.action.name}, {"satisfied", s.disjunct_status(i)}});
    }
    return {{"phase", std::string(to_string(s.phase()))},
            {"depth", s.model().depth()},
            {"open_actions", open},
            {"mutual_beliefs", m}};
}

}  // namespace

SessionService::SessionService(std::map<std::string, Scenario> scenarios,
                               std::optional<std::filesystem::path> journal_dir)
    : scenarios_(std::move(scenarios)), journal_dir_(std::move(journal_dir)) {
    if (journal_dir_) std::filesystem::create_directories(*journal_dir_);
}

std::map<std::string, Scenario> SessionService::load_directory(const std::filesystem::path& dir) {
    std::map<std::string, Scenario> out;
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::parse_error, "no scenario directory " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        Scenario s = load_scenario_file(f);
        out.emplace(s.name, std::move(s));
    }
    return out;
}

json SessionService::scenarios() const {
    json out = json::array();
    for (const auto& [name, s] : scenarios_) {
        json branches = json::array();
        for (const auto& [b, _] : s.script.branches) branches.push_back(b);
        out.push_back({{"name", name}, {"description", s.description}, {"branches", branches}});
    }
    return out;
}

const Scenario& SessionService::scenario(const std::string& name) const {
    auto it = scenarios_.find(name);
    if (it == scenarios_.end()) throw Error(ErrorCode::unknown_scenario, "no scenario '" + name + "'");
    return it->second;
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
    std::shared_lock lock(registry_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::unknown_session, "no session '" + id + "'");
    return it->second;
}

json SessionService::create_session(const std::string& name) {
    const Scenario& s = scenario(name);
    std::unique_lock lock(registry_mutex_);
    int seq = next_id_++;
    while (sessions_.contains("s" + std::to_string(seq))) seq = next_id_++;
    const std::string id = "s" + std::to_string(seq);
    sessions_[id] = std::make_shared<Entry>(name, seq, make_session(s, id));
    return {{"session_id", id}, {"scenario", name}, {"created_at", seq}, {"phase", "awaiting-proposal"}};
}

void SessionService::journal(const std::string& id, const std::string& scenario, const UserInput& in) const {
    if (!journal_dir_) return;
    std::ofstream out(*journal_dir_ / (id + ".jsonl"), std::ios::app);
    out << json{{"session", id}, {"scenario", scenario}, {"input", to_json(in)}}.dump() << '\n';
}

json SessionService::step(const std::string& id, const json& payload, bool proposal) {
    auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    Session& s = entry->session;
    const Scenario& sc = scenario(entry->scenario);
    const std::size_t trace_before = s.trace().size();

    UserInput in;
    if (proposal) {
        const json& tree = payload.contains("tree") ? payload.at("tree") : payload;
        in = UserInput::propose(tree_from_json(tree, s.kb(), declarations(sc)));
    } else {
        in = input_from_json(payload, s.kb(), declarations(sc));
    }
    const auto acts = s.apply(in);
    journal(id, entry->scenario, in);

    json aj = json::array();
    for (const auto& a : acts) aj.push_back(to_json(a));
    json tj = json::array();
    for (std::size_t i = trace_before; i < s.trace().size(); ++i) tj.push_back(to_json(s.trace()[i]));
    json out{{"acts", aj}, {"state_delta", delta(s)}, {"trace", tj}};
    if (!s.model().records.empty()) {
        const auto& r = s.model().records.back();
        if (r.evaluation) out["annotations"] = to_json(*r.evaluation);
    }
    return out;
}

json SessionService::propose(const std::string& id, const json& tree) { return step(id, tree, true); }

json SessionService::respond(const std::string& id, const json& reply) { return step(id, reply, false); }

json SessionService::state(const std::string& id) const {
    auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    json j = session_state(entry->session);
    j["scenario"] = entry->scenario;
    j["created_at"] = entry->created;
    return j;
}

std::string SessionService::transcript(const std::string& id, const std::string& format) const {
    auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    return export_transcript(entry->session, format, entry->scenario);
}

json SessionService::eval(const std::string& id, const json& body) const {
    auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    const Session& s = entry->session;
    const Scenario& sc = scenario(entry->scenario);
    const json& tj = body.contains("tree") ? body.at("tree") : body;
    const ProposedBeliefTree tree = tree_from_json(tj, s.kb(), declarations(sc));
    const TreeEvaluation ev = s.preview(tree);
    const auto& root = ev.at(tree.root()).belief;
    return {{"annotations", to_json(ev)},
            {"root", tree.root()},
            {"case", to_json(classify_combination(root.upper, root.lower))},
            {"phase", std::string(to_string(s.phase()))}};
}

std::size_t SessionService::restore() {
    if (!journal_dir_) return 0;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(*journal_dir_))
        if (e.path().extension() == ".jsonl") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::size_t restored = 0;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::string line;
        std::optional<std::string> name;
        std::vector<json> inputs;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            name = j.at("scenario").get<std::string>();
            inputs.push_back(j.at("input"));
        }
        if (!name) continue;
        const std::string id = f.stem().string();
        Session s = make_session(scenario(*name), id);
        for (const auto& i : inputs) s.apply(input_from_json(i, s.kb()));
        std::unique_lock lock(registry_mutex_);
        const int seq = next_id_++;
        sessions_[id] = std::make_shared<Entry>(*name, seq, std::move(s));
        ++restored;
    }
    return restored;
}

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>()) {
    httplib::Server& server = impl_->server;

    auto guarded = [](httplib::Response& res, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            res.status = http_status(e.code());
            res.set_content(json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump(),
                            "application/json");
        } catch (const json::exception& e) {
            res.status = 422;
            res.set_content(json{{"error", "parse-error"}, {"message", e.what()}}.dump(), "application/json");
        }
    };
    auto body = [](const httplib::Request& req) {
        try {
            return json::parse(req.body);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::parse_error, e.what());
        }
    };
    auto send = [](httplib::Response& res, const json& j) { res.set_content(j.dump(), "application/json"); };

    server.Get("/scenarios", [&service, guarded, send](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { send(res, service.scenarios()); });
    });
    server.Post("/sessions", [&service, guarded, body, send](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            json b = body(req);
            if (!b.contains("scenario") || !b.at("scenario").is_string())
                throw Error(ErrorCode::validation_error, "body needs a 'scenario' name");
            send(res, service.create_session(b.at("scenario").get<std::string>()));
            res.status = 201;
        });
    });
    server.Post(R"(/sessions/([^/]+)/propose)",
                [&service, guarded, body, send](const httplib::Request& req, httplib::Response& res) {
                    guarded(res, [&] { send(res, service.propose(req.matches[1], body(req))); });
                });
    server.Post(R"(/sessions/([^/]+)/respond)",
                [&service, guarded, body, send](const httplib::Request& req, httplib::Response& res) {
                    guarded(res, [&] { send(res, service.respond(req.matches[1], body(req))); });
                });
    server.Post(R"(/sessions/([^/]+)/eval)",
                [&service, guarded, body, send](const httplib::Request& req, httplib::Response& res) {
                    guarded(res, [&] { send(res, service.eval(req.matches[1], body(req))); });
                });
    server.Get(R"(/sessions/([^/]+)/state)", [&service, guarded, send](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send(res, service.state(req.matches[1])); });
    });
    server.Get(R"(/sessions/([^/]+)/transcript)", [&service, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string format = req.has_param("format") ? req.get_param_value("format") : "full-trace";
            const std::string text = service.transcript(req.matches[1], format);
            res.set_content(text, format == "text-only" ? "text/plain" : "application/json");
        });
    });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int got = impl_->server.bind_to_any_port(host);
        if (got < 0) throw std::runtime_error("cannot bind " + host);
        return got;
    }
    if (!impl_->server.bind_to_port(host, port))
        throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void serve(SessionService& service, const std::string& host, int port) {
    HttpServer server(service);
    server.bind(host, port);
    server.run();
}

}  // namespace parley
