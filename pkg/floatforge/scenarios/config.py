"""
Scenario Configuration Module
-----------------------------

Parses, validates and echoes the line-oriented scenario files:

    # comments start with '#' or ';'
    [domain]
    size = 60 40 30

    [lattice]
    tau = 1.1
    gravity = 1e-5            # one value: magnitude along -z, or a 3-vector

    [boundary]
    x_min = periodic
    x_max = periodic
    y_min = noslip
    y_min_velocity = 1e-4 0 0

    [fill]
    kind = below
    level = 19.5

    [body.ball]
    shape = sphere
    radius = 6
    density = 0.5
    position = 30 20 19.5

    [run]
    scenario = advection
    steps = 20000

Every value is validated where it is read, so errors carry the line number
of the offending key. ``ScenarioConfig.echo()`` writes every field,
defaults included, and ``parse_config(config.echo()) == config``.

Author: FloatForge Developers
License: MIT
"""

# IMPORTS

import logging
import math
import re
from dataclasses import dataclass, field, fields
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from floatforge.bodies.dynamics import BodyState, Constraints, RigidBody
from floatforge.bodies.shapes import SHAPES, Cuboid, Sphere
from floatforge.errors import ConfigError
from floatforge.freesurface.cells import FILL_KINDS, FillSpec
from floatforge.lattice.operators import SimParams
from floatforge.lattice.topology import FACES, NOSLIP, PERIODIC, DomainBoundaries, DomainTopology, FaceSpec

logger = logging.getLogger(__name__)

Vector = Tuple[float, float, float]
ZERO: Vector = (0.0, 0.0, 0.0)

SCENARIOS = ("free_run", "advection", "equilibrium", "stability")


# SECTION TYPES


@dataclass(frozen=True)
class DomainConfig:
    size: Tuple[int, int, int]


@dataclass(frozen=True)
class LatticeConfig:
    tau: float = 1.0
    gravity: Vector = ZERO
    rho_gas: float = 1.0
    epsilon: float = 0.01
    workers: int = 1
    check_interval: int = 100
    mach_warn: float = 0.1
    stability_warn: float = 0.1
    virtual_mass: float = 0.5
    average_forces: bool = False


@dataclass(frozen=True)
class BoundaryConfig:
    x_min: str = PERIODIC
    x_min_velocity: Vector = ZERO
    x_max: str = PERIODIC
    x_max_velocity: Vector = ZERO
    y_min: str = PERIODIC
    y_min_velocity: Vector = ZERO
    y_max: str = PERIODIC
    y_max_velocity: Vector = ZERO
    z_min: str = PERIODIC
    z_min_velocity: Vector = ZERO
    z_max: str = PERIODIC
    z_max_velocity: Vector = ZERO

    def to_boundaries(self) -> DomainBoundaries:
        return DomainBoundaries(
            {
                face: FaceSpec(getattr(self, face), getattr(self, f"{face}_velocity"))
                for face in FACES
            }
        )

    def wall_velocities(self) -> List[Vector]:
        return [getattr(self, f"{face}_velocity") for face in FACES if getattr(self, face) == NOSLIP]


@dataclass(frozen=True)
class FillConfig:
    kind: str = "all"
    level: float = 0.0
    slope: Tuple[float, float] = (0.0, 0.0)
    hydrostatic: bool = True
    velocity: Vector = ZERO

    def to_spec(self) -> FillSpec:
        return FillSpec(self.kind, self.level, self.slope, self.hydrostatic, self.velocity)


@dataclass(frozen=True)
class BodyConfig:
    """
    One rigid body.

    ``size`` is (length, width, height) of a cuboid; ``rotation`` is a
    rotation vector in degrees applied to the body frame; the fix_* keys
    name the frozen world axes ('' for none).
    """

    name: str
    shape: str = "sphere"
    radius: float = 0.0
    size: Vector = ZERO
    density: float = 1.0
    position: Vector = ZERO
    velocity: Vector = ZERO
    angular_velocity: Vector = ZERO
    rotation: Vector = ZERO
    fix_translation: str = ""
    fix_rotation: str = ""

    def build(self) -> RigidBody:
        if self.shape == "sphere":
            shape = Sphere(self.radius)
        else:
            shape = Cuboid(*self.size)
        if any(self.rotation):
            orientation = Rotation.from_rotvec(np.radians(self.rotation)).as_quat()
        else:
            orientation = np.array([0.0, 0.0, 0.0, 1.0])
        state = BodyState(self.position, orientation, self.velocity, self.angular_velocity)
        constraints = Constraints.from_axes(self.fix_translation, self.fix_rotation)
        return RigidBody(self.name, shape, self.density, state, constraints)


@dataclass(frozen=True)
class RunConfig:
    scenario: str = "free_run"
    steps: int = 0
    sample_every: int = 1
    output_every: int = 0
    output_dir: str = "output"
    seed: int = 0


@dataclass(frozen=True)
class AdvectionConfig:
    stage: int = 4
    channel_velocity: float = 1e-4


@dataclass(frozen=True)
class EquilibriumConfig:
    max_steps: int = 200000
    stall_energy: float = 1e-12
    stall_steps: int = 2000


@dataclass(frozen=True)
class StabilityConfig:
    width: float = 24.0
    height: float = 16.0
    length: float = 32.0
    density: float = 0.5
    alphas: Tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    warmup: int = 5000
    average: int = 5000


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Complete, validated scenario description.

    Example:
        >>> config = parse_config("[domain]\\nsize = 8 8 8\\n")
        >>> config.lattice.tau
        1.0
        >>> parse_config(config.echo()) == config
        True
    """

    domain: DomainConfig
    lattice: LatticeConfig = field(default_factory=LatticeConfig)
    boundary: BoundaryConfig = field(default_factory=BoundaryConfig)
    fill: FillConfig = field(default_factory=FillConfig)
    bodies: Tuple[BodyConfig, ...] = ()
    run: RunConfig = field(default_factory=RunConfig)
    advection: AdvectionConfig = field(default_factory=AdvectionConfig)
    equilibrium: EquilibriumConfig = field(default_factory=EquilibriumConfig)
    stability: StabilityConfig = field(default_factory=StabilityConfig)

    def to_params(self) -> SimParams:
        return SimParams(
            tau=self.lattice.tau,
            gravity=self.lattice.gravity,
            rho_gas=self.lattice.rho_gas,
            epsilon=self.lattice.epsilon,
            size=self.domain.size,
        )

    def to_topology(self) -> DomainTopology:
        return DomainTopology(self.domain.size, self.boundary.to_boundaries())

    def build_bodies(self) -> List[RigidBody]:
        return [body.build() for body in self.bodies]

    def expected_velocities(self) -> List[Vector]:
        """Wall, body and initial fluid velocities, for the stability check."""
        velocities = list(self.boundary.wall_velocities())
        velocities.append(self.fill.velocity)
        velocities.extend(body.velocity for body in self.bodies)
        return velocities

    def echo(self) -> str:
        """Render every value, defaults included, in the input format."""
        blocks = []
        for name in ("domain", "lattice", "boundary", "fill"):
            blocks.append(_render_section(name, getattr(self, name)))
        for body in self.bodies:
            unused = "size" if body.shape == "sphere" else "radius"
            blocks.append(_render_section(f"body.{body.name}", body, skip=("name", unused)))
        for name in ("run", "advection", "equilibrium", "stability"):
            blocks.append(_render_section(name, getattr(self, name)))
        return "\n".join(blocks)


# VALUE CONVERTERS
# Each converter takes the raw string and returns the typed value or raises
# ValueError with a short reason; the parser adds section, key and line.


def _float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"expected a finite number, got '{text}'")
    return value


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"expected an integer, got '{text}'") from None


def _bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected true or false, got '{text}'")


def _split(text: str) -> List[str]:
    return [part for part in re.split(r"[\s,]+", text.strip()) if part]


def _floats(count: Optional[int] = None) -> Callable[[str], Tuple[float, ...]]:
    def convert(text: str) -> Tuple[float, ...]:
        values = tuple(_float(part) for part in _split(text))
        if count is not None and len(values) != count:
            raise ValueError(f"expected {count} numbers, got {len(values)}")
        if not values:
            raise ValueError("expected at least one number")
        return values

    return convert


def _size(text: str) -> Tuple[int, int, int]:
    values = tuple(_int(part) for part in _split(text))
    if len(values) != 3:
        raise ValueError(f"expected 3 integers, got {len(values)}")
    if any(v < 1 for v in values):
        raise ValueError(f"cell counts must be positive, got {values}")
    return values


def _gravity(text: str) -> Vector:
    values = _floats()(text)
    if len(values) == 1:
        return (0.0, 0.0, -values[0])
    if len(values) == 3:
        return values
    raise ValueError(f"expected 1 or 3 numbers, got {len(values)}")


def _axes(text: str) -> str:
    if text.lower() == "none":
        return ""
    letters = text.replace(",", "").replace(" ", "").lower()
    if not letters or any(a not in "xyz" for a in letters) or len(set(letters)) != len(letters):
        raise ValueError(f"expected 'none' or distinct axes from 'xyz', got '{text}'")
    return "".join(a for a in "xyz" if a in letters)


def _choice(options: Tuple[str, ...]) -> Callable[[str], str]:
    def convert(text: str) -> str:
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got '{text}'")
        return text

    return convert


def _text(text: str) -> str:
    if not text:
        raise ValueError("expected a non-empty value")
    return text


def _checked(convert: Callable[[str], Any], ok: Callable[[Any], bool], what: str):
    def checked(text: str) -> Any:
        value = convert(text)
        if not ok(value):
            raise ValueError(f"{what}, got {value}")
        return value

    return checked


def _positive(value: Any) -> bool:
    return value > 0


_VEC3 = _floats(3)

SCHEMA: Dict[str, Dict[str, Callable[[str], Any]]] = {
    "domain": {"size": _size},
    "lattice": {
        "tau": _checked(_float, lambda v: v > 0.5, "tau must be > 0.5"),
        "gravity": _gravity,
        "rho_gas": _checked(_float, _positive, "rho_gas must be positive"),
        "epsilon": _checked(_float, lambda v: 0 <= v < 0.5, "epsilon must lie in [0, 0.5)"),
        "workers": _checked(_int, _positive, "workers must be >= 1"),
        "check_interval": _checked(_int, _positive, "check_interval must be >= 1"),
        "mach_warn": _checked(_float, _positive, "mach_warn must be positive"),
        "stability_warn": _checked(_float, _positive, "stability_warn must be positive"),
        "virtual_mass": _checked(_float, lambda v: v >= 0, "virtual_mass must be >= 0"),
        "average_forces": _bool,
    },
    "boundary": {},
    "fill": {
        "kind": _choice(FILL_KINDS),
        "level": _float,
        "slope": _floats(2),
        "hydrostatic": _bool,
        "velocity": _VEC3,
    },
    "body": {
        "shape": _choice(tuple(SHAPES)),
        "radius": _checked(_float, _positive, "radius must be positive"),
        "size": _checked(_VEC3, lambda v: min(v) > 0, "cuboid edges must be positive"),
        "density": _checked(_float, _positive, "density must be positive"),
        "position": _VEC3,
        "velocity": _VEC3,
        "angular_velocity": _VEC3,
        "rotation": _VEC3,
        "fix_translation": _axes,
        "fix_rotation": _axes,
    },
    "run": {
        "scenario": _choice(SCENARIOS),
        "steps": _checked(_int, lambda v: v >= 0, "steps must be >= 0"),
        "sample_every": _checked(_int, _positive, "sample_every must be >= 1"),
        "output_every": _checked(_int, lambda v: v >= 0, "output_every must be >= 0"),
        "output_dir": _text,
        "seed": _int,
    },
    "advection": {
        "stage": _checked(_int, lambda v: v in (1, 2, 3, 4), "stage must be 1, 2, 3 or 4"),
        "channel_velocity": _float,
    },
    "equilibrium": {
        "max_steps": _checked(_int, _positive, "max_steps must be >= 1"),
        "stall_energy": _checked(_float, _positive, "stall_energy must be positive"),
        "stall_steps": _checked(_int, _positive, "stall_steps must be >= 1"),
    },
    "stability": {
        "width": _checked(_float, _positive, "width must be positive"),
        "height": _checked(_float, _positive, "height must be positive"),
        "length": _checked(_float, _positive, "length must be positive"),
        "density": _checked(_float, lambda v: 0 < v < 1, "density must lie in (0, 1)"),
        "alphas": _floats(),
        "warmup": _checked(_int, lambda v: v >= 0, "warmup must be >= 0"),
        "average": _checked(_int, lambda v: v >= 2, "average must be >= 2"),
    },
}
for _face in FACES:
    SCHEMA["boundary"][_face] = _choice((PERIODIC, NOSLIP))
    SCHEMA["boundary"][f"{_face}_velocity"] = _VEC3

SECTION_TYPES = {
    "domain": DomainConfig,
    "lattice": LatticeConfig,
    "boundary": BoundaryConfig,
    "fill": FillConfig,
    "run": RunConfig,
    "advection": AdvectionConfig,
    "equilibrium": EquilibriumConfig,
    "stability": StabilityConfig,
}

_SECTION_RE = re.compile(r"^\[\s*([A-Za-z_][\w.\-]*)\s*\]$")
_BODY_NAME_RE = re.compile(r"^[A-Za-z_][\w\-]*$")


# PARSING


@dataclass
class _RawSection:
    name: str
    line: int
    values: Dict[str, Tuple[Any, int]] = field(default_factory=dict)


def _strip_comment(line: str) -> str:
    for marker in ("#", ";"):
        pos = line.find(marker)
        if pos >= 0:
            line = line[:pos]
    return line.strip()


def _read_sections(text: str) -> List[_RawSection]:
    sections: List[_RawSection] = []
    current: Optional[_RawSection] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        header = _SECTION_RE.match(line)
        if header:
            name = header.group(1)
            if name.startswith("body."):
                body_name = name[len("body."):]
                if not _BODY_NAME_RE.match(body_name):
                    raise ConfigError(f"invalid body name '{body_name}'", number)
                kind = "body"
            else:
                kind = name
            if kind not in SCHEMA:
                raise ConfigError(f"unknown section [{name}]", number)
            if any(s.name == name for s in sections):
                raise ConfigError(f"duplicate section [{name}]", number)
            current = _RawSection(name, number)
            sections.append(current)
            continue
        if current is None:
            raise ConfigError("key outside of a [section]", number)
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got '{line}'", number)
        key, value = (part.strip() for part in line.split("=", 1))
        schema = SCHEMA["body" if current.name.startswith("body.") else current.name]
        if key not in schema:
            raise ConfigError(f"unknown key '{key}' in [{current.name}]", number)
        if key in current.values:
            raise ConfigError(f"duplicate key '{key}' in [{current.name}]", number)
        try:
            converted = schema[key](value)
        except ValueError as exc:
            raise ConfigError(f"[{current.name}] {key}: {exc}", number) from None
        current.values[key] = (converted, number)
    return sections


def _body_config(section: _RawSection) -> BodyConfig:
    values = {key: value for key, (value, _) in section.values.items()}
    name = section.name[len("body."):]
    shape = values.get("shape", "sphere")
    if shape == "sphere" and "radius" not in values:
        raise ConfigError(f"[{section.name}] sphere needs 'radius'", section.line)
    if shape == "cuboid" and "size" not in values:
        raise ConfigError(f"[{section.name}] cuboid needs 'size'", section.line)
    unused = "size" if shape == "sphere" else "radius"
    if unused in values:
        raise ConfigError(
            f"[{section.name}] a {shape} takes no '{unused}'", section.values[unused][1]
        )
    return BodyConfig(name=name, **values)


def parse_config(text: str) -> ScenarioConfig:
    """
    Parse and validate a scenario file.

    Args:
        text: Contents of the configuration file.

    Returns:
        ScenarioConfig: The validated configuration with defaults applied.

    Raises:
        ConfigError: For unknown sections or keys, malformed or out-of-range
            values (with the line number) and missing required keys.
    """
    sections = _read_sections(text)
    kwargs: Dict[str, Any] = {}
    bodies: List[BodyConfig] = []
    for section in sections:
        if section.name.startswith("body."):
            bodies.append(_body_config(section))
            continue
        values = {key: value for key, (value, _) in section.values.items()}
        if section.name == "domain" and "size" not in values:
            raise ConfigError("[domain] is missing the required key 'size'", section.line)
        kwargs[section.name] = SECTION_TYPES[section.name](**values)
    if "domain" not in kwargs:
        raise ConfigError("missing required section [domain] with key 'size'")

    boundary = next((s for s in sections if s.name == "boundary"), None)
    try:
        kwargs.get("boundary", BoundaryConfig()).to_boundaries()
    except ConfigError as exc:
        raise ConfigError(str(exc), boundary.line if boundary else None) from None

    config = ScenarioConfig(bodies=tuple(bodies), **kwargs)
    logger.debug("Parsed configuration with %d bodies", len(bodies))
    return config


def load_config(path: str) -> ScenarioConfig:
    """Read and parse a configuration file (UTF-8)."""
    with open(path, encoding="utf-8") as handle:
        return parse_config(handle.read())


# RENDERING


def _render_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return " ".join(_render_value(v) for v in value)
    if isinstance(value, str) and value == "":
        return "none"
    return str(value)


def _render_section(name: str, section: Any, skip: Tuple[str, ...] = ()) -> str:
    lines = [f"[{name}]"]
    for item in fields(section):
        if item.name in skip:
            continue
        lines.append(f"{item.name} = {_render_value(getattr(section, item.name))}")
    return "\n".join(lines) + "\n"
