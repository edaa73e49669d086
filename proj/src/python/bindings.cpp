// JSON-in/JSON-out bindings. Python sees strings; the wrapper in
// parley/__init__.py turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parley/error.hpp"
#include "parley/scenario.hpp"

namespace py = pybind11;
using namespace parley;

namespace {

Declarations declarations(const Scenario& s) {
    Declarations d;
    for (const auto& p : s.predicates) d[p.name] = p;
    return d;
}

class PySession {
public:
    PySession(const std::string& scenario_json, const std::string& id)
        : scenario_(load_scenario(scenario_json)), session_(make_session(scenario_, id)) {}

    std::string propose(const std::string& tree_json) {
        const json j = json::parse(tree_json);
        return step(UserInput::propose(tree_from_json(j.contains("tree") ? j.at("tree") : j, session_.kb(),
                                                      declarations(scenario_))));
    }

    std::string respond(const std::string& reply_json) {
        return step(input_from_json(json::parse(reply_json), session_.kb(), declarations(scenario_)));
    }

    std::string state() const { return session_state(session_).dump(); }
    std::string transcript(const std::string& format) const {
        return export_transcript(session_, format, scenario_.name);
    }
    std::string phase() const { return std::string(to_string(session_.phase())); }

    std::string preview(const std::string& tree_json) const {
        const json j = json::parse(tree_json);
        const auto tree = tree_from_json(j.contains("tree") ? j.at("tree") : j, session_.kb(), declarations(scenario_));
        const auto ev = session_.preview(tree);
        const auto& root = ev.at(tree.root()).belief;
        return json{{"annotations", to_json(ev)},
                    {"root", tree.root()},
                    {"case", to_json(classify_combination(root.upper, root.lower))}}
            .dump();
    }

private:
    std::string step(const UserInput& in) {
        json out = json::array();
        for (const auto& a : session_.apply(in)) out.push_back(to_json(a));
        return out.dump();
    }

    Scenario scenario_;
    Session session_;
};

std::string evaluate_json(const std::string& scenario_json, const std::string& tree_json) {
    const Scenario s = load_scenario(scenario_json);
    const KnowledgeBase kb = s.knowledge_base();
    const auto tree = tree_from_json(json::parse(tree_json), kb, declarations(s));
    return to_json(evaluate_tree(tree, kb, s.thresholds)).dump();
}

std::string run_scenario(const std::string& scenario_json, const std::string& branch, const std::string& format) {
    const Scenario s = load_scenario(scenario_json);
    Session session = make_session(s, "run");
    for (const auto& in : s.script_for(branch)) {
        if (session.concluded()) break;
        session.apply(in);
    }
    return export_transcript(session, format, s.name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "parley engine bindings";

    static py::exception<Error> error(m, "ParleyError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetObject(error.ptr(), py::make_tuple(std::string(to_string(e.code())), e.what()).ptr());
        } catch (const json::exception& e) {
            PyErr_SetObject(error.ptr(), py::make_tuple(std::string("parse-error"), e.what()).ptr());
        }
    });

    m.def("validate_scenario", [](const std::string& text) { return export_scenario(load_scenario(text)).dump(); });
    m.def("evaluate", &evaluate_json, py::arg("scenario"), py::arg("tree"));
    m.def("run_scenario", &run_scenario, py::arg("scenario"), py::arg("branch") = "",
          py::arg("format") = "full-trace");

    py::class_<PySession>(m, "Session")
        .def(py::init<const std::string&, const std::string&>(), py::arg("scenario"), py::arg("id") = "py")
        .def("propose", &PySession::propose)
        .def("respond", &PySession::respond)
        .def("preview", &PySession::preview)
        .def("state", &PySession::state)
        .def("transcript", &PySession::transcript, py::arg("format") = "full-trace")
        .def_property_readonly("phase", &PySession::phase);
}
