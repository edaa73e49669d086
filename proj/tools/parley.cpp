// parley: run scripted dialogues, serve the session API, dump one-shot evaluations.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "parley/error.hpp"
#include "parley/gateway.hpp"
#include "parley/scenario.hpp"

using namespace parley;

namespace {

std::optional<Scenario> load_or_report(const std::string& path) {
    try {
        return load_scenario_file(path);
    } catch (const Error& e) {
        std::cerr << "parley: " << e.what() << "\n";
        return std::nullopt;
    }
}

int run(const std::string& path, const std::string& branch, const std::string& trace_out, const std::string& format) {
    auto scenario = load_or_report(path);
    if (!scenario) return 1;
    std::vector<UserInput> script;
    try {
        script = scenario->script_for(branch);
    } catch (const Error& e) {
        std::cerr << "parley: " << e.what() << "\n";
        return 1;
    }

    Session session = make_session(*scenario, "run");
    try {
        for (const auto& in : script) {
            if (session.concluded()) break;
            session.apply(in);
        }
    } catch (const Error& e) {
        std::cerr << "parley: engine error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::cout << export_transcript(session, format, scenario->name);
    } catch (const Error& e) {
        std::cerr << "parley: " << e.what() << "\n";
        return 1;
    }
    if (!trace_out.empty()) {
        std::ofstream out(trace_out, std::ios::binary);
        if (!out) {
            std::cerr << "parley: cannot write " << trace_out << "\n";
            return 1;
        }
        out << export_transcript(session, "full-trace", scenario->name);
    }
    std::cerr << "phase: " << to_string(session.phase()) << "\n";
    return 0;
}

int eval(const std::string& path, const std::string& belief, const std::string& branch) {
    auto scenario = load_or_report(path);
    if (!scenario) return 1;
    const KnowledgeBase kb = scenario->knowledge_base();

    std::vector<UserInput> candidates = scenario->script.common;
    for (const auto& [name, turns] : scenario->script.branches)
        if (branch.empty() || name == branch) candidates.insert(candidates.end(), turns.begin(), turns.end());
    for (const auto& in : candidates) {
        if (!in.tree || !in.tree->contains(belief)) continue;
        const auto ev = evaluate_tree(*in.tree, kb, scenario->thresholds);
        const auto& node = ev.at(belief);
        json out{{"node", belief},
                 {"belief", to_json(node.belief)},
                 {"case", to_json(classify_combination(node.belief.upper, node.belief.lower))}};
        if (node.relation) out["relation"] = to_json(*node.relation);
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cerr << "parley: no scripted tree has a node '" << belief << "'\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collaborative belief negotiation engine"};
    app.require_subcommand(1);

    std::string scenario_path, branch, trace_out, format = "text-only", belief;
    auto* run_cmd = app.add_subcommand("run", "Run a scripted dialogue");
    run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    run_cmd->add_option("--branch", branch, "Script branch (default: the scenario's default)");
    run_cmd->add_option("--trace", trace_out, "Write the full trace here");
    run_cmd->add_option("--format", format, "Transcript format on stdout")
        ->check(CLI::IsMember({"full-trace", "acts-only", "text-only"}));

    int port = 8080;
    std::string host = "127.0.0.1";
    const char* env_dir = std::getenv("PARLEY_SCENARIO_DIR");
    std::string scenario_dir = env_dir ? env_dir : "scenarios";
    std::string journal_dir;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP session API");
    serve_cmd->add_option("--port", port, "Port");
    serve_cmd->add_option("--host", host, "Bind address");
    serve_cmd->add_option("--scenario-dir", scenario_dir, "Directory of scenario files");
    serve_cmd->add_option("--journal", journal_dir, "Append-only session journal directory");

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate one scripted node against the initial knowledge base");
    eval_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    eval_cmd->add_option("--belief", belief, "Node id")->required();
    eval_cmd->add_option("--branch", branch, "Restrict the search to one branch");

    CLI11_PARSE(app, argc, argv);

    if (*run_cmd) return run(scenario_path, branch, trace_out, format);
    if (*eval_cmd) return eval(scenario_path, belief, branch);

    try {
        SessionService service(SessionService::load_directory(scenario_dir),
                               journal_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(journal_dir));
        if (std::size_t n = service.restore()) std::cerr << "restored " << n << " sessions\n";
        std::cerr << "listening on " << host << ":" << port << "\n";
        serve(service, host, port);
    } catch (const std::exception& e) {
        std::cerr << "parley: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
