"""Python front end for the parley belief-negotiation engine."""

import json
from pathlib import Path

from ._core import ParleyError
from . import _core

__all__ = ["ParleyError", "Session", "evaluate", "load_scenario", "run_scenario"]


def _text(scenario):
    if isinstance(scenario, dict):
        return json.dumps(scenario)
    if isinstance(scenario, Path) or (isinstance(scenario, str) and not scenario.lstrip().startswith("{")):
        return Path(scenario).read_text()
    return scenario


def load_scenario(scenario):
    """Validate a scenario (dict, JSON text or path) and return its normalised form."""
    return json.loads(_core.validate_scenario(_text(scenario)))


def evaluate(scenario, tree):
    """Annotate a proposed tree against the scenario's initial knowledge."""
    return json.loads(_core.evaluate(_text(scenario), json.dumps(tree)))


def run_scenario(scenario, branch="", format="full-trace"):
    out = _core.run_scenario(_text(scenario), branch, format)
    return out if format == "text-only" else json.loads(out)


class Session:
    def __init__(self, scenario, id="py"):
        self._s = _core.Session(_text(scenario), id)

    @property
    def phase(self):
        return self._s.phase

    def propose(self, tree):
        return json.loads(self._s.propose(json.dumps(tree)))

    def respond(self, reply):
        return json.loads(self._s.respond(json.dumps(reply)))

    def preview(self, tree):
        return json.loads(self._s.preview(json.dumps(tree)))

    def state(self):
        return json.loads(self._s.state())

    def transcript(self, format="full-trace"):
        out = self._s.transcript(format)
        return out if format == "text-only" else json.loads(out)
