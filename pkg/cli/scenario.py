# cli/scenario.py
"""Scenario files: strict JSON schema with defaults, resolution and echo"""
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np

from config.settings import LabConfig, get_config
from errors import CheckpointError, ValidationError
from polynomial import GaugePolynomial, get_preset, load_polynomial_file
from solver.grid import GridDescriptor
from solver.stepper import EvolutionConfig

logger = logging.getLogger(__name__)

ECHO_NAME = "scenario.resolved.json"

_REQUIRED = object()
INITIAL_KINDS = ("ground_state", "soliton", "gaussian", "from_checkpoint", "scaled")


class _Section:
    """One JSON object being consumed key by key; leftovers are rejected"""

    def __init__(self, data: Any, pointer: str):
        if not isinstance(data, dict):
            raise ValidationError(f"expected an object, got {type(data).__name__}", pointer=pointer or "/")
        self.data = dict(data)
        self.pointer = pointer

    def at(self, key: str) -> str:
        return f"{self.pointer}/{key}"

    def has(self, key: str) -> bool:
        return key in self.data

    def take(self, key: str, convert: Callable[[Any, str], Any], default: Any = _REQUIRED):
        if key not in self.data:
            if default is _REQUIRED:
                raise ValidationError("required key is missing", pointer=self.at(key))
            return default
        return convert(self.data.pop(key), self.at(key))

    def section(self, key: str, required: bool = False) -> "_Section":
        if key not in self.data:
            if required:
                raise ValidationError("required section is missing", pointer=self.at(key))
            return _Section({}, self.at(key))
        return _Section(self.data.pop(key), self.at(key))

    def finish(self):
        if self.data:
            key = sorted(self.data)[0]
            raise ValidationError(f"unknown key {key!r}", pointer=self.at(key))


def _number(value, pointer) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
        raise ValidationError(f"expected a finite number, got {value!r}", pointer=pointer)
    return float(value)


def _positive(value, pointer) -> float:
    value = _number(value, pointer)
    if value <= 0:
        raise ValidationError(f"expected a positive number, got {value}", pointer=pointer)
    return value


def _integer(value, pointer) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"expected an integer, got {value!r}", pointer=pointer)
    return int(value)


def _boolean(value, pointer) -> bool:
    if not isinstance(value, bool):
        raise ValidationError(f"expected true or false, got {value!r}", pointer=pointer)
    return value


def _string(value, pointer) -> str:
    if not isinstance(value, str) or not value:
        raise ValidationError(f"expected a non-empty string, got {value!r}", pointer=pointer)
    return value


def _list(value, pointer) -> list:
    if not isinstance(value, list):
        raise ValidationError(f"expected a list, got {value!r}", pointer=pointer)
    return value


def _vector(length: Optional[int] = 3):
    def convert(value, pointer) -> List[float]:
        if not isinstance(value, list) or (length is not None and len(value) != length):
            size = "a list" if length is None else f"a list of {length} numbers"
            raise ValidationError(f"expected {size}, got {value!r}", pointer=pointer)
        return [_number(v, f"{pointer}/{i}") for i, v in enumerate(value)]
    return convert


def _complex_vector(value, pointer) -> List[List[float]]:
    """Numbers or [re, im] pairs, normalized to [re, im] pairs"""
    if not isinstance(value, list) or not value:
        raise ValidationError(f"expected a list of components, got {value!r}", pointer=pointer)
    out = []
    for i, entry in enumerate(value):
        if isinstance(entry, list):
            re, im = _vector(2)(entry, f"{pointer}/{i}")
        else:
            re, im = _number(entry, f"{pointer}/{i}"), 0.0
        out.append([re, im])
    return out


def _existing_path(base: Path):
    def convert(value, pointer) -> str:
        path = Path(_string(value, pointer))
        path = path if path.is_absolute() else (base / path)
        if not path.exists():
            raise ValidationError(f"file {str(path)!r} does not exist", pointer=pointer)
        return str(path.resolve())
    return convert


def _output_path(base: Path):
    def convert(value, pointer) -> str:
        path = Path(_string(value, pointer))
        return str((path if path.is_absolute() else base / path).resolve())
    return convert


def as_complex(pairs: List[List[float]]) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs])


# ---------------------------------------------------------------------- #
# sections


@dataclass(frozen=True)
class PolynomialSpec:
    """A preset with parameters, an inline table or a table file"""
    preset: Optional[str] = None
    params: Dict[str, float] = field(default_factory=dict)
    table: Optional[dict] = None
    file: Optional[str] = None

    def build(self) -> GaugePolynomial:
        if self.preset is not None:
            return get_preset(self.preset, **self.params)
        if self.table is not None:
            return GaugePolynomial.from_json(self.table)
        return load_polynomial_file(self.file)

    def to_dict(self) -> dict:
        if self.preset is not None:
            return {"preset": self.preset, **self.params}
        if self.table is not None:
            return dict(self.table)
        return {"file": self.file}


def _parse_polynomial(section: _Section, base: Path) -> PolynomialSpec:
    if section.has("preset"):
        preset = section.take("preset", _string)
        params = {}
        for key in sorted(section.data):
            convert = _integer if key == "n" else _number
            params[key] = section.take(key, convert)
        spec = PolynomialSpec(preset=preset, params=params)
    elif section.has("terms"):
        n = section.take("n", _integer)
        terms = section.take("terms", _list)
        spec = PolynomialSpec(table={"n": n, "terms": terms})
    elif section.has("file"):
        spec = PolynomialSpec(file=section.take("file", _existing_path(base)))
    else:
        raise ValidationError("expected one of 'preset', 'terms' or 'file'", pointer=section.pointer)
    section.finish()
    try:
        polynomial = spec.build()
    except ValidationError as e:
        raise ValidationError(e.detail, pointer=section.pointer + (e.pointer or "")) from e
    if spec.table is not None:
        spec = PolynomialSpec(table=polynomial.to_json())
    return spec


@dataclass(frozen=True)
class InitialDataSpec:
    """Initial-data descriptor; `params` holds the normalized fields of its kind"""
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def inner(self) -> Optional["InitialDataSpec"]:
        return self.params.get("inner")

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for key, value in self.params.items():
            out[key] = value.to_dict() if isinstance(value, InitialDataSpec) else value
        return out


def _parse_w(value, pointer):
    if value == "optimize":
        return value
    return _complex_vector(value, pointer)


def _parse_initial(section: _Section, base: Path, n_components: int) -> InitialDataSpec:
    kind = section.take("kind", _string)
    if kind not in INITIAL_KINDS:
        raise ValidationError(f"unknown kind {kind!r}; choose from {list(INITIAL_KINDS)}", pointer=section.at("kind"))
    params: Dict[str, Any] = {}
    if kind in ("ground_state", "soliton"):
        params["omega"] = section.take("omega", _positive, 1.0)
        params["w"] = section.take("w", _parse_w, "optimize")
        params["y"] = section.take("y", _vector(), [0.0, 0.0, 0.0])
        params["refine"] = section.take("refine", _boolean, kind == "soliton")
        if kind == "soliton":
            params["xi"] = section.take("xi", _vector(), [0.0, 0.0, 0.0])
        if params["w"] != "optimize":
            w = as_complex(params["w"])
            if w.size != n_components:
                raise ValidationError(f"w has {w.size} components, polynomial has {n_components}",
                                      pointer=section.at("w"))
            if abs(np.linalg.norm(w) - 1.0) > 1e-8:
                raise ValidationError(f"w must be a unit vector, |w| = {np.linalg.norm(w)}", pointer=section.at("w"))
    elif kind == "gaussian":
        params["amplitude"] = section.take("amplitude", _complex_vector)
        if len(params["amplitude"]) != n_components:
            raise ValidationError(
                f"amplitude has {len(params['amplitude'])} components, polynomial has {n_components}",
                pointer=section.at("amplitude"),
            )
        params["width"] = section.take("width", _positive, 1.0)
        params["center"] = section.take("center", _vector(), [0.0, 0.0, 0.0])
        params["phase"] = section.take("phase", _vector(), [0.0, 0.0, 0.0])
    elif kind == "from_checkpoint":
        params["path"] = section.take("path", _existing_path(base))
    else:
        params["lambda"] = section.take("lambda", _number)
        params["inner"] = _parse_initial(section.section("inner", required=True), base, n_components)
    section.finish()
    return InitialDataSpec(kind=kind, params=params)


@dataclass(frozen=True)
class GridSpec:
    n: int = 64
    L: float = 32.0

    def descriptor(self, n_components: int, workers: Optional[int] = None) -> GridDescriptor:
        return GridDescriptor(self.n, self.L, n_components, workers=workers)


@dataclass(frozen=True)
class DiagnosticsSpec:
    R: float = 8.0
    boost_check: bool = False
    xi0: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    wrap_fraction: float = 0.99


@dataclass(frozen=True)
class OutputSpec:
    dir: str
    csv: str = "diagnostics.csv"
    json: str = "summary.json"
    checkpoint_dir: Optional[str] = None

    @property
    def csv_path(self) -> Path:
        return Path(self.dir) / self.csv

    @property
    def json_path(self) -> Path:
        return Path(self.dir) / self.json

    @property
    def checkpoints(self) -> Path:
        return Path(self.checkpoint_dir) if self.checkpoint_dir else Path(self.dir) / "checkpoints"


@dataclass(frozen=True)
class Scenario:
    """A fully resolved experiment description"""
    polynomial: PolynomialSpec
    initial_data: InitialDataSpec
    grid: GridSpec
    evolution: EvolutionConfig
    diagnostics: DiagnosticsSpec
    outputs: OutputSpec
    seed: int = 0

    def n_components(self) -> int:
        return self.polynomial.build().n_components

    def with_outputs(self, **changes) -> "Scenario":
        return replace(self, outputs=replace(self.outputs, **changes))

    def to_dict(self) -> dict:
        return {
            "polynomial": self.polynomial.to_dict(),
            "initial_data": self.initial_data.to_dict(),
            "grid": {"n": self.grid.n, "L": self.grid.L},
            "evolution": self.evolution.as_dict(),
            "diagnostics": {
                "R": self.diagnostics.R,
                "boost_check": self.diagnostics.boost_check,
                "xi0": list(self.diagnostics.xi0),
                "wrap_fraction": self.diagnostics.wrap_fraction,
            },
            "outputs": {
                "dir": self.outputs.dir,
                "csv": self.outputs.csv,
                "json": self.outputs.json,
                "checkpoint_dir": str(self.outputs.checkpoints),
            },
            "seed": self.seed,
        }


def parse_scenario(data: Any, base: Union[str, Path] = ".", defaults: Optional[LabConfig] = None) -> Scenario:
    """Validate a scenario object and fill defaults; relative paths resolve against `base`"""
    base = Path(base)
    defaults = defaults or get_config()
    root = _Section(data, "")
    polynomial = _parse_polynomial(root.section("polynomial", required=True), base)
    n_components = polynomial.build().n_components

    grid_section = root.section("grid")
    grid = GridSpec(n=grid_section.take("n", _integer, defaults.grid_n),
                    L=grid_section.take("L", _positive, defaults.box_length))
    grid_section.finish()
    try:
        grid.descriptor(n_components)
    except ValidationError as e:
        raise ValidationError(e.detail, pointer=e.pointer or "/grid") from e

    initial = _parse_initial(root.section("initial_data", required=True), base, n_components)

    evo = root.section("evolution")
    evolution = EvolutionConfig(
        dt=evo.take("dt", _number, defaults.dt),
        t_end=evo.take("t_end", _number, 1.0),
        substeps_nl=evo.take("substeps_nl", _integer, defaults.substeps_nl),
        guard_grad_factor=evo.take("guard_grad_factor", _number, defaults.guard_grad_factor),
        snapshot_every=evo.take("snapshot_every", _integer, 10),
        checkpoint_every=evo.take("checkpoint_every", _integer, 0),
        renormalize_density=evo.take("renormalize_density", _boolean, defaults.renormalize_density),
    )
    evo.finish()

    diag = root.section("diagnostics")
    diagnostics = DiagnosticsSpec(
        R=diag.take("R", _positive, grid.L / 4.0),
        boost_check=diag.take("boost_check", _boolean, False),
        xi0=diag.take("xi0", _vector(), [0.0, 0.0, 0.0]),
        wrap_fraction=diag.take("wrap_fraction", _number, defaults.wrap_fraction),
    )
    diag.finish()
    if 2.0 * diagnostics.R > grid.L / 2.0:
        raise ValidationError(f"cutoff support 2R={2 * diagnostics.R} exceeds L/2={grid.L / 2}",
                              pointer="/diagnostics/R")
    if not 0 < diagnostics.wrap_fraction < 1:
        raise ValidationError("wrap_fraction must lie in (0, 1)", pointer="/diagnostics/wrap_fraction")

    out = root.section("outputs")
    out_dir = out.take("dir", _output_path(base), str(base.resolve()))
    outputs = OutputSpec(
        dir=out_dir,
        csv=out.take("csv", _string, "diagnostics.csv"),
        json=out.take("json", _string, "summary.json"),
        checkpoint_dir=out.take("checkpoint_dir", _output_path(Path(out_dir)), None),
    )
    outputs = replace(outputs, checkpoint_dir=str(outputs.checkpoints))
    out.finish()

    seed = root.take("seed", _integer, 0)
    root.finish()
    return Scenario(polynomial=polynomial, initial_data=initial, grid=grid, evolution=evolution,
                    diagnostics=diagnostics, outputs=outputs, seed=seed)


def echo_scenario(scenario: Scenario, directory: Union[str, Path, None] = None) -> Path:
    """Write the fully resolved scenario as scenario.resolved.json"""
    directory = Path(directory or scenario.outputs.dir)
    path = directory / ECHO_NAME
    try:
        directory.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(scenario.to_dict(), f, indent=2)
            f.write("\n")
    except OSError as e:
        raise CheckpointError(f"Failed to write scenario echo {path}: {e}") from e
    return path


def read_scenario_file(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"Failed to parse {path}: {e}", pointer="/") from e
    except OSError as e:
        raise CheckpointError(f"Failed to read scenario {path}: {e}") from e


def load_scenario(path: Union[str, Path], echo: bool = True, defaults: Optional[LabConfig] = None) -> Scenario:
    """Parse, validate and default a scenario file, echoing the resolved form next to its outputs"""
    path = Path(path)
    scenario = parse_scenario(read_scenario_file(path), base=path.resolve().parent, defaults=defaults)
    if echo:
        logger.info("resolved scenario echoed to %s", echo_scenario(scenario))
    return scenario
