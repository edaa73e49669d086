#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "parley/error.hpp"
#include "parley/scenario.hpp"

namespace parley {

int http_status(ErrorCode code);

/// Transport-independent session store. Each session is guarded by its own
/// mutex so requests against one session are applied one at a time, while
/// distinct sessions proceed in parallel.
class SessionService {
public:
    explicit SessionService(std::map<std::string, Scenario> scenarios,
                            std::optional<std::filesystem::path> journal_dir = std::nullopt);

    // Loads every *.json scenario in `dir`, keyed by the scenario's name.
    static std::map<std::string, Scenario> load_directory(const std::filesystem::path& dir);

    json scenarios() const;
    json create_session(const std::string& scenario);
    json propose(const std::string& id, const json& tree);
    json respond(const std::string& id, const json& reply);
    json state(const std::string& id) const;
    std::string transcript(const std::string& id, const std::string& format) const;
    // What-if evaluation of a tree against the session's current knowledge.
    json eval(const std::string& id, const json& body) const;

    // Replays journals written by an earlier run.
    std::size_t restore();

private:
    struct Entry {
        mutable std::mutex mutex;
        std::string scenario;
        int created = 0;
        Session session;

        Entry(std::string scenario_name, int seq, Session s)
            : scenario(std::move(scenario_name)), created(seq), session(std::move(s)) {}
    };

    std::shared_ptr<Entry> find(const std::string& id) const;
    const Scenario& scenario(const std::string& name) const;
    json step(const std::string& id, const json& payload, bool proposal);
    void journal(const std::string& id, const std::string& scenario, const UserInput& in) const;

    std::map<std::string, Scenario> scenarios_;
    std::optional<std::filesystem::path> journal_dir_;
    mutable std::shared_mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    int next_id_ = 1;
};

// HTTP front end over a SessionService.
class HttpServer {
public:
    explicit HttpServer(SessionService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Port 0 picks a free one. Returns the bound port.
    int bind(const std::string& host, int port);
    // Blocks until stop() is called from another thread.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Blocks serving the HTTP API until the process is stopped.
void serve(SessionService& service, const std::string& host, int port);

}  // namespace parley
