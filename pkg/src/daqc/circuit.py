"""Turn a decomposition into a digital-analog schedule.

A single-qubit rotation ``R(theta, n) = exp(-i theta/2 n.sigma)`` maps
``sigma^z`` to ``gamma . sigma`` with

    gamma = (n_x n_z (1-cos) + n_y sin,  n_y n_z (1-cos) - n_x sin,  n_z^2 (1-cos) + cos).

Emitted rotations always use ``n_z = 0`` and ``theta`` in ``[0, pi]``, which
reaches every unit ``gamma`` with two parameters.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .decomposer import Decomposition, decompose
from .errors import HamiltonianFormatError, NonZZSource, NotUnit
from .hamiltonian import TwoBodyHamiltonian, build_coupling_ratio_matrix, gauge_fix_psd

__all__ = [
    "SQGParams",
    "DigitalAnalogBlock",
    "Schedule",
    "rotation_to_gamma",
    "gamma_to_rotation",
    "effective_couplings",
    "assemble_schedule",
    "exponent_sum",
    "compile_schedule",
    "dumps_schedule",
    "loads_schedule",
    "save_schedule",
    "load_schedule",
]

POLE_TOL = 1e-12
UNIT_TOL = 1e-10
COEFF_FLOOR = 1e-15
GENERATOR = f"daqc {__version__}"


@dataclass(frozen=True)
class SQGParams:
    angle: float
    axis: tuple[float, float, float] = (1.0, 0.0, 0.0)

    def __post_init__(self):
        axis = tuple(float(a) for a in self.axis)
        if len(axis) != 3:
            raise ValueError("axis must have three components")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "angle", float(self.angle))
        if abs(math.hypot(*axis) - 1.0) > 1e-12:
            raise NotUnit(f"rotation axis {axis} is not a unit vector")

    def matrix(self) -> np.ndarray:
        """The 2x2 unitary ``exp(-i angle/2 axis.sigma)``."""
        nx, ny, nz = self.axis
        c = math.cos(self.angle / 2)
        s = math.sin(self.angle / 2)
        return np.array(
            [[c - 1j * s * nz, -1j * s * nx - s * ny], [-1j * s * nx + s * ny, c + 1j * s * nz]]
        )


@dataclass(frozen=True)
class DigitalAnalogBlock:
    analog_time: float
    rotations: tuple[SQGParams, ...]

    def __post_init__(self):
        if not self.analog_time > 0:
            raise ValueError(f"analog_time must be positive, got {self.analog_time}")
        object.__setattr__(self, "rotations", tuple(self.rotations))

    def gammas(self) -> np.ndarray:
        return np.array([rotation_to_gamma(r) for r in self.rotations])


@dataclass(frozen=True)
class Schedule:
    n_qubits: int
    source: TwoBodyHamiltonian
    sim_time: float
    blocks: tuple[DigitalAnalogBlock, ...]
    discarded_weight: float = 0.0
    generator: str = GENERATOR
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        for b in self.blocks:
            if len(b.rotations) != self.n_qubits:
                raise ValueError("every block needs one rotation per qubit")

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def total_analog_time(self) -> float:
        return math.fsum(b.analog_time for b in self.blocks)


def rotation_to_gamma(params: SQGParams) -> np.ndarray:
    nx, ny, nz = params.axis
    c = math.cos(params.angle)
    s = math.sin(params.angle)
    return np.array([nx * nz * (1 - c) + ny * s, ny * nz * (1 - c) - nx * s, nz * nz * (1 - c) + c])


def gamma_to_rotation(gamma) -> SQGParams:
    """Invert :func:`rotation_to_gamma` in the ``n_z = 0`` gauge.

    At the poles the axis is free and set to ``(1, 0, 0)``.
    """
    g = np.asarray(gamma, dtype=float)
    if g.shape != (3,):
        raise ValueError(f"gamma must have three components, got shape {g.shape}")
    if abs(float(np.linalg.norm(g)) - 1.0) > UNIT_TOL:
        raise NotUnit(f"gamma {gamma!r} is not a unit vector")
    theta, axis = _rotation_arrays(g)
    return SQGParams(float(theta), tuple(axis.tolist()))


def _rotation_arrays(gammas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`gamma_to_rotation` over a ``(..., 3)`` array."""
    g = np.asarray(gammas, dtype=float)
    if g.size and np.max(np.abs(np.linalg.norm(g, axis=-1) - 1.0)) > UNIT_TOL:
        raise NotUnit("gamma stack contains a non-unit vector")
    gx, gy, gz = g[..., 0], g[..., 1], g[..., 2]
    # atan2 equals arccos(gz) on the unit sphere and stays accurate near the poles
    sin_theta = np.hypot(gx, gy)
    pole = sin_theta <= POLE_TOL
    theta = np.where(pole, np.where(gz > 0, 0.0, np.pi), np.arctan2(sin_theta, gz))
    safe = np.where(pole, 1.0, sin_theta)
    axes = np.stack([np.where(pole, 1.0, -gy / safe), np.where(pole, 0.0, gx / safe), np.zeros_like(gx)], axis=-1)
    return theta, axes


def effective_couplings(source: TwoBodyHamiltonian, gamma) -> TwoBodyHamiltonian:
    """Couplings of ``U H_S U^dagger`` when ``U`` maps ``sigma_i^z`` to ``gamma_i . sigma_i``."""
    if not source.is_zz_only():
        raise NonZZSource("effective couplings need a zz-only source")
    g = np.asarray(gamma, dtype=float).reshape(source.n_qubits, 3)
    couplings = {}
    for (i, j, _, _), h in source.couplings.items():
        block = h * np.outer(g[i], g[j])
        for mu in range(3):
            for nu in range(3):
                if abs(block[mu, nu]) >= COEFF_FLOOR:
                    couplings[(i, j, mu, nu)] = float(block[mu, nu])
    return TwoBodyHamiltonian(source.n_qubits, couplings)


def assemble_schedule(
    decomposition: Decomposition, source: TwoBodyHamiltonian, sim_time: float
) -> Schedule:
    if source.n_qubits != decomposition.n_qubits:
        raise ValueError("decomposition and source disagree on qubit count")
    if not source.is_zz_only():
        raise NonZZSource("schedules are assembled against zz-only sources")
    angles, axes = _rotation_arrays(decomposition.gammas)
    blocks = [
        DigitalAnalogBlock(float(t), tuple(map(SQGParams, a.tolist(), map(tuple, x.tolist()))))
        for t, a, x in zip(decomposition.times, angles, axes)
    ]
    return Schedule(
        decomposition.n_qubits,
        source,
        float(sim_time),
        tuple(blocks),
        discarded_weight=float(decomposition.discarded_weight),
    )


def exponent_sum(schedule: Schedule) -> TwoBodyHamiltonian:
    """``sum_q t_q H_S^(q)`` as a coupling map; equals ``T H_P`` by construction."""
    n = schedule.n_qubits
    total = np.zeros((3 * n, 3 * n))
    for block in schedule.blocks:
        eff = effective_couplings(schedule.source, block.gammas())
        total += block.analog_time * eff.to_matrix()
    return TwoBodyHamiltonian.from_matrix(n, total, floor=COEFF_FLOOR)


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("cannot serialize non-finite float")
    text = "%.17g" % x
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def _is_flat(v) -> bool:
    if isinstance(v, (list, tuple)):
        return all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    return not isinstance(v, dict)


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if all(_is_flat(v) for v in obj.values()):
            return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v, indent, level)}" for k, v in obj.items()) + "}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, indent: int = 1) -> str:
    """JSON text with every float written using 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def schedule_to_dict(schedule: Schedule) -> dict:
    source = schedule.source.to_json_dict()
    for term in source["terms"]:
        term["coeff"] = float(term["coeff"])
    return {
        "n_qubits": schedule.n_qubits,
        "sim_time": float(schedule.sim_time),
        "source": source,
        "blocks": [
            {
                "t": float(b.analog_time),
                "rotations": [{"theta": r.angle, "axis": list(r.axis)} for r in b.rotations],
            }
            for b in schedule.blocks
        ],
        "metadata": {
            "discarded_weight": float(schedule.discarded_weight),
            "generator": schedule.generator,
            **schedule.extra,
        },
    }


def schedule_from_dict(data: dict) -> Schedule:
    try:
        n = data["n_qubits"]
        source = TwoBodyHamiltonian.from_json_dict(data["source"])
        blocks = [
            DigitalAnalogBlock(
                float(b["t"]),
                tuple(SQGParams(float(r["theta"]), tuple(r["axis"])) for r in b["rotations"]),
            )
            for b in data["blocks"]
        ]
        meta = dict(data.get("metadata", {}))
        schedule = Schedule(
            int(n),
            source,
            float(data["sim_time"]),
            tuple(blocks),
            discarded_weight=float(meta.pop("discarded_weight", 0.0)),
            generator=str(meta.pop("generator", "")),
            extra=meta,
        )
    except (KeyError, TypeError) as exc:
        raise HamiltonianFormatError(f"malformed schedule: {exc!r}") from None
    if source.n_qubits != schedule.n_qubits:
        raise HamiltonianFormatError("schedule n_qubits disagrees with its source")
    return schedule


def dumps_schedule(schedule: Schedule) -> str:
    return dumps_json(schedule_to_dict(schedule))


def loads_schedule(text: str) -> Schedule:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HamiltonianFormatError(f"invalid schedule JSON ({exc})") from None
    return schedule_from_dict(data)


def save_schedule(schedule: Schedule, path) -> None:
    Path(path).write_text(dumps_schedule(schedule), encoding="utf-8", newline="\n")


def load_schedule(path) -> Schedule:
    return loads_schedule(Path(path).read_text(encoding="utf-8"))


def compile_schedule(problem, source, sim_time: float, discard_threshold: float = 0.0):
    """Full pipeline: coupling ratios, gauge fixing, decomposition, assembly.

    Returns ``(schedule, decomposition, gauge-fixed matrix)``.
    """
    b = gauge_fix_psd(build_coupling_ratio_matrix(problem, source, sim_time))
    decomposition = decompose(b, discard_threshold)
    return assemble_schedule(decomposition, source, sim_time), decomposition, b
