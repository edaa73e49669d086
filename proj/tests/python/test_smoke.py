import json
import os
from pathlib import Path

import pytest

import parley

ROOT = Path(os.environ.get("PARLEY_SOURCE_DIR", Path(__file__).resolve().parents[2]))
COURSE = ROOT / "scenarios" / "course-advisement.json"

PROPOSAL = {
    "id": "n1",
    "claim": "Better-Than(Logic,Algorithms)",
    "form": "direct-assertion",
    "children": [{"id": "n2", "claim": "Teaches(Smith,Logic)", "form": "direct-assertion"}],
}


def test_load_accepts_path_text_and_dict():
    by_path = parley.load_scenario(COURSE)
    by_text = parley.load_scenario(COURSE.read_text())
    by_dict = parley.load_scenario(json.loads(COURSE.read_text()))
    assert by_path == by_text == by_dict
    assert by_path["name"] == "course-advisement"


def test_evaluate_reports_case_two():
    ev = parley.evaluate(COURSE, PROPOSAL)
    assert ev["n1"]["belief"]["upper"] == "accept"
    assert ev["n1"]["belief"]["lower"] == "unsure"


def test_branch_text_matches_golden():
    text = parley.run_scenario(COURSE, "8d", "text-only")
    assert text == (ROOT / "tests" / "golden" / "course-advisement-8d.txt").read_text()


def test_session_round():
    s = parley.Session(COURSE)
    assert s.phase == "awaiting-proposal"
    out = s.propose(PROPOSAL)
    assert out[-1]["kind"] == "ExpressDoubt"
    assert s.phase == "awaiting-response"
    s.respond({"kind": "accept"})
    s.respond({"kind": "accept"})
    assert s.phase == "concluded-reject"
    assert s.transcript("text-only").startswith("U: ")


def test_errors_carry_codes():
    s = parley.Session(COURSE)
    with pytest.raises(parley.ParleyError) as e:
        s.respond({"kind": "accept"})
    assert e.value.args[0] == "no-open-action"
    with pytest.raises(parley.ParleyError):
        parley.load_scenario("{broken")


def _validator(name):
    jsonschema = pytest.importorskip("jsonschema")
    referencing = pytest.importorskip("referencing")
    docs = [json.loads(p.read_text()) for p in (ROOT / "schemas").glob("*.json")]
    registry = referencing.Registry().with_resources(
        (d["$id"], referencing.Resource.from_contents(d)) for d in docs)
    schema = json.loads((ROOT / "schemas" / name).read_text())
    return jsonschema.Draft202012Validator(schema, registry=registry)


@pytest.mark.parametrize("name", ["course-advisement", "travel-agent"])
def test_shipped_scenarios_match_schema(name):
    raw = json.loads((ROOT / "scenarios" / f"{name}.json").read_text())
    v = _validator("scenario.schema.json")
    v.validate(raw)
    v.validate(parley.load_scenario(raw))


@pytest.mark.parametrize("branch", ["8a", "8b", "8c", "8d"])
def test_traces_match_schema(branch):
    v = _validator("trace-v1.schema.json")
    v.validate(parley.run_scenario(COURSE, branch, "full-trace"))
    v.validate(parley.run_scenario(COURSE, branch, "acts-only"))
