"""
Run configuration documents (JSON).

Example::

    {
      "array": {"aperture_wavelengths": 9, "spacing_wavelengths": 0.5},
      "polarisations": {
        "signal1": {"gamma_deg": 0, "eta_deg": 0},
        "signal2": {"gamma_deg": 90, "eta_deg": 0}
      },
      "mainlobe": {"directions": [[0, 90]]},
      "sidelobe": {"theta_deg": {"start": 5, "stop": 90, "step": 1},
                   "phi_deg": [90, -90]},
      "modulation_order": 4,
      "constellation_magnitude": 1.0,
      "sidelobe_magnitude": 0.1,
      "seed": 20171113,
      "diagonal_loading": 0.0,
      "sweep_step_deg": 1.0
    }

``array`` may instead give explicit ``positions`` (wavelengths), and
``num_elements`` overrides the count implied by aperture and spacing.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass
from pathlib import Path

from .design import DEMO_SEED, DesignSpec, angle_grid, cut_directions
from .steering import ArrayGeometry, Direction, PolarizationState

TOP_LEVEL_KEYS = {
    "array", "polarisations", "mainlobe", "sidelobe", "modulation_order",
    "constellation_magnitude", "sidelobe_magnitude", "seed", "diagonal_loading",
    "sweep_step_deg", "output",
}


class ConfigError(ValueError):
    def __init__(self, field: str, message: str, source: str = "<config>",
                 line: int | None = None):
        self.field = field
        self.line = line
        where = f"{source}:{line}" if line else source
        super().__init__(f"{where}: {field}: {message}")


def _locate(text: str, field: str) -> int | None:
    """1-based line of the first occurrence of the innermost key of ``field``."""
    if not text:
        return None
    key = field.split(".")[-1]
    key = re.sub(r"\[\d+\]$", "", key)
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if not m:
        return None
    return text.count("\n", 0, m.start()) + 1


def _number(doc: dict, key: str, path: str, default=None, kind=float):
    if key not in doc:
        if default is None:
            raise KeyError(path)
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(path)
    if kind is int and int(value) != value:
        raise TypeError(path)
    return kind(value)


def _directions(node, path: str) -> tuple[Direction, ...]:
    if not isinstance(node, dict):
        raise _Bad(path, "must be an object")
    if "directions" in node:
        out = []
        for i, pair in enumerate(node["directions"]):
            if not (isinstance(pair, list) and len(pair) == 2):
                raise _Bad(f"{path}.directions", f"entry {i} must be [theta_deg, phi_deg]")
            try:
                out.append(Direction(*pair))
            except (TypeError, ValueError) as exc:
                raise _Bad(f"{path}.directions", f"entry {i}: {exc}") from None
        return tuple(out)
    if "theta_deg" in node:
        th = node["theta_deg"]
        if not isinstance(th, dict) or not {"start", "stop", "step"} <= th.keys():
            raise _Bad(f"{path}.theta_deg", "needs start, stop and step")
        phis = node.get("phi_deg", [90.0])
        if not isinstance(phis, list) or not phis:
            raise _Bad(f"{path}.phi_deg", "must be a non-empty list")
        try:
            return cut_directions(angle_grid(th["start"], th["stop"], th["step"]), phis)
        except (TypeError, ValueError) as exc:
            raise _Bad(f"{path}.theta_deg", str(exc)) from None
    raise _Bad(path, "needs either 'directions' or 'theta_deg'")


class _Bad(Exception):
    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message


def _geometry(node) -> ArrayGeometry:
    if not isinstance(node, dict):
        raise _Bad("array", "must be an object")
    try:
        if "positions" in node:
            return ArrayGeometry(tuple(node["positions"]))
        spacing = node.get("spacing_wavelengths", 0.5)
        if "num_elements" in node:
            n = node["num_elements"]
            if isinstance(n, bool) or not isinstance(n, int):
                raise _Bad("array.num_elements", "must be an integer")
            return ArrayGeometry.uniform(n, spacing)
        if "aperture_wavelengths" in node:
            return ArrayGeometry.from_aperture(node["aperture_wavelengths"], spacing)
    except (TypeError, ValueError) as exc:
        raise _Bad("array", str(exc)) from None
    raise _Bad("array", "needs positions, num_elements or aperture_wavelengths")


def _polarisation(node, path: str) -> PolarizationState:
    if not isinstance(node, dict) or not {"gamma_deg", "eta_deg"} <= node.keys():
        raise _Bad(path, "needs gamma_deg and eta_deg")
    try:
        return PolarizationState(node["gamma_deg"], node["eta_deg"])
    except (TypeError, ValueError) as exc:
        raise _Bad(path, str(exc)) from None


@dataclass
class RunConfig:
    """A validated configuration document plus the design it describes."""

    doc: dict
    design: DesignSpec
    sweep_step: float = 1.0

    @classmethod
    def from_dict(cls, doc: dict, text: str = "", source: str = "<config>") -> "RunConfig":
        try:
            return cls._build(doc)
        except _Bad as bad:
            raise ConfigError(bad.field, bad.message, source, _locate(text, bad.field)) from None

    @classmethod
    def _build(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise _Bad("<root>", "configuration must be a JSON object")
        unknown = sorted(set(doc) - TOP_LEVEL_KEYS)
        if unknown:
            raise _Bad(unknown[0], "unknown field")
        for key in ("array", "polarisations", "mainlobe", "sidelobe"):
            if key not in doc:
                raise _Bad(key, "missing required field")

        geometry = _geometry(doc["array"])
        pols = doc["polarisations"]
        if not isinstance(pols, dict):
            raise _Bad("polarisations", "must be an object")
        pol1 = _polarisation(pols.get("signal1"), "polarisations.signal1")
        pol2 = _polarisation(pols.get("signal2"), "polarisations.signal2")
        mainlobe = _directions(doc["mainlobe"], "mainlobe")
        sidelobe = _directions(doc["sidelobe"], "sidelobe")

        scalars = {}
        for key, default, kind in (("modulation_order", 4, int),
                                   ("constellation_magnitude", 1.0, float),
                                   ("sidelobe_magnitude", 0.1, float),
                                   ("seed", DEMO_SEED, int),
                                   ("diagonal_loading", 0.0, float),
                                   ("sweep_step_deg", 1.0, float)):
            try:
                scalars[key] = _number(doc, key, key, default, kind)
            except TypeError:
                raise _Bad(key, f"must be a{'n integer' if kind is int else ' number'}") from None

        if scalars["sweep_step_deg"] <= 0:
            raise _Bad("sweep_step_deg", "must be positive")
        if "output" in doc and not isinstance(doc["output"], dict):
            raise _Bad("output", "must be an object")

        try:
            design = DesignSpec(
                geometry=geometry, pol1=pol1, pol2=pol2,
                mainlobe_dirs=mainlobe, sidelobe_dirs=sidelobe,
                constellation_magnitude=scalars["constellation_magnitude"],
                sidelobe_magnitude=scalars["sidelobe_magnitude"],
                modulation_order=scalars["modulation_order"],
                seed=scalars["seed"],
                diagonal_loading=scalars["diagonal_loading"],
            )
        except ValueError as exc:
            raise _Bad(_design_field(str(exc)), str(exc)) from None
        return cls(copy.deepcopy(doc), design, scalars["sweep_step_deg"])

    def to_dict(self) -> dict:
        return copy.deepcopy(self.doc)

    def dumps(self) -> str:
        return json.dumps(self.doc, indent=2) + "\n"

    def output_path(self, key: str, default: str | None = None) -> str | None:
        return self.doc.get("output", {}).get(key, default)


def _design_field(message: str) -> str:
    if "overlap" in message:
        return "sidelobe"
    for key in ("constellation_magnitude", "sidelobe_magnitude", "modulation_order",
                "diagonal_loading", "seed", "mainlobe"):
        if key in message:
            return key
    return "<root>"


def load_config(path) -> RunConfig:
    path = Path(path)
    text = path.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<root>", f"invalid JSON: {exc.msg}", str(path), exc.lineno) from None
    return RunConfig.from_dict(doc, text, str(path))


def example_config_doc() -> dict:
    """Configuration document for the built-in 19-element example."""
    return {
        "array": {"aperture_wavelengths": 9.0, "spacing_wavelengths": 0.5},
        "polarisations": {
            "signal1": {"gamma_deg": 0.0, "eta_deg": 0.0},
            "signal2": {"gamma_deg": 90.0, "eta_deg": 0.0},
        },
        "mainlobe": {"directions": [[0.0, 90.0]]},
        "sidelobe": {"theta_deg": {"start": 5.0, "stop": 90.0, "step": 1.0},
                     "phi_deg": [90.0, -90.0]},
        "modulation_order": 4,
        "constellation_magnitude": 1.0,
        "sidelobe_magnitude": 0.1,
        "seed": DEMO_SEED,
        "diagonal_loading": 0.0,
        "sweep_step_deg": 1.0,
    }
