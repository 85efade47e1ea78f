"""Declarative scenarios: config parsing, execution and report emitters.

Config files are flat UTF-8 ``key = value`` lines; ``#`` starts a comment.
One scenario per file.  Example::

    kind = precession
    theta = 1.0472
    steps = 4096
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction

import numpy as np

from . import models
from .curvature import FrameFamily, chern_charges, sphere_family, theorem1_residual, two_form_field
from .errors import ConfigError
from .evolution import Constant, evolve, measurement_loop, trajectory
from .gates import gate_verdict, hadamard_gate, phase_gate
from .linalg import phase_distance, wrap_phase
from .phases import bargmann_phase, phase_decomposition, sum_residual, sum_rule_check
from .states import Frame, bloch_frame, complete_frame

KINDS = (
    "precession",
    "random-hamiltonian",
    "rotating-field",
    "frame-family",
    "spin-monopole",
    "measurement-loop",
    "gate-check",
)
GATES = ("hadamard", "identity", "phase")
REQUIRED = {
    "precession": ("theta",),
    "random-hamiltonian": ("dim",),
    "spin-monopole": ("spin",),
    "gate-check": ("gate",),
}
FLOAT_FORMAT = "shortest-roundtrip (Python repr)"
# below this both refinement levels are at roundoff and their ratio is noise
ROUNDOFF_FLOOR = 1e-13
BLOCH_MARGIN = 0.1
OCTANT = "1, 0; 1, 1; 1, 1j"


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    dim: int | None = None
    seed: int = 0
    steps: int = 4096
    grid: tuple[int, int] = (64, 64)
    duration: float | None = None
    tolerance: float = 1e-6
    theta: float | None = None
    omega: float | None = None
    omega0: float | None = None
    spin: str | None = None
    gate: str | None = None
    gammas: tuple[float, ...] | None = None
    points: str | None = None

    def echo(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if f.name == "grid":
                v = f"{v[0]}x{v[1]}"
            elif isinstance(v, tuple):
                v = list(v)
            out[f.name] = v
        return out


def _int(key, raw, lo=1, hi=None):
    try:
        v = int(raw, 0)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None
    if v < lo or (hi is not None and v > hi):
        raise ConfigError(f"{key}: {v} out of range")
    return v


def _float(key, raw, positive=False):
    try:
        v = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
    if not math.isfinite(v) or (positive and v <= 0):
        raise ConfigError(f"{key}: expected a {'positive ' if positive else ''}finite number, got {raw!r}")
    return v


def parse_grid(raw: str) -> tuple[int, int]:
    parts = raw.lower().replace("×", "x").split("x")
    if len(parts) != 2:
        raise ConfigError(f"grid: expected AxB, got {raw!r}")
    a, b = (_int("grid", p.strip(), lo=2) for p in parts)
    return a, b


def parse_spin(raw: str) -> str:
    try:
        j = Fraction(raw.strip()).limit_denominator(1000)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"spin: expected e.g. 1/2 or 1.5, got {raw!r}") from None
    if j <= 0 or (2 * j).denominator != 1:
        raise ConfigError(f"spin: must be a positive multiple of 1/2, got {raw!r}")
    return str(j)


def parse_points(raw: str) -> list[np.ndarray]:
    pts = []
    for chunk in raw.split(";"):
        try:
            comps = [complex(c.strip().replace(" ", "")) for c in chunk.split(",")]
        except ValueError:
            raise ConfigError(f"points: cannot parse {chunk.strip()!r}") from None
        pts.append(np.array(comps))
    if len({p.size for p in pts}) != 1:
        raise ConfigError("points: all states must have the same dimension")
    return pts


def _points(raw: str) -> str:
    # validated here, kept as text so the config echoes what was written
    parse_points(raw)
    return raw.strip()


_PARSERS = {
    "kind": lambda k, v: v,
    "dim": lambda k, v: _int(k, v),
    "seed": lambda k, v: _int(k, v, lo=0, hi=2**64 - 1),
    "steps": lambda k, v: _int(k, v),
    "grid": lambda k, v: parse_grid(v),
    "duration": lambda k, v: _float(k, v, positive=True),
    "tolerance": lambda k, v: _float(k, v, positive=True),
    "theta": lambda k, v: _float(k, v),
    "omega": lambda k, v: _float(k, v, positive=True),
    "omega0": lambda k, v: _float(k, v),
    "spin": lambda k, v: parse_spin(v),
    "gate": lambda k, v: v.lower(),
    "gammas": lambda k, v: tuple(_float(k, x) for x in v.split(",")),
    "points": lambda k, v: _points(v),
}


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario document, filling defaults."""
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected key = value, got {body!r}")
        key, raw = (s.strip() for s in body.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[key](key, raw)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return validate(values)


def validate(values: dict) -> ScenarioConfig:
    kind = values.get("kind")
    if kind is None:
        raise ConfigError("missing required key 'kind'")
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    for key in REQUIRED.get(kind, ()):
        if key not in values:
            raise ConfigError(f"kind {kind}: missing required key {key!r}")
    if kind in ("precession", "rotating-field") and values.get("dim", 2) != 2:
        raise ConfigError(f"kind {kind}: dim must be 2")
    if kind == "precession" and not 0 <= values["theta"] <= math.pi:
        raise ConfigError("theta: must lie in [0, pi]")
    if kind == "gate-check":
        gate = values["gate"]
        if gate not in GATES:
            raise ConfigError(f"gate: unknown gate {gate!r}; expected one of {', '.join(GATES)}")
        if gate == "phase":
            if "gammas" not in values:
                raise ConfigError("gate = phase: missing required key 'gammas'")
            values.setdefault("dim", len(values["gammas"]))
            if values["dim"] != len(values["gammas"]):
                raise ConfigError("gammas: length must equal dim")
        elif "dim" not in values:
            raise ConfigError(f"gate = {gate}: missing required key 'dim'")
        if gate == "hadamard" and values["dim"] < 2:
            raise ConfigError("dim: Hadamard gate needs dim >= 2")
    if kind == "measurement-loop" and "points" in values:
        pts = parse_points(values["points"])
        if len(pts) < 2:
            raise ConfigError("points: need at least two states")
    return ScenarioConfig(**values)


@dataclass
class RunReport:
    scenario: dict
    phases: list[dict] = field(default_factory=list)
    residual_theorem1: float | None = None
    residual_theorem2: float | None = None
    charges: list[int] = field(default_factory=list)
    verdict: dict | None = None
    generator: str = models.GENERATOR
    timing_ms: float | None = None
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks.values())


def _check(report, name, value, tolerance, ok=None):
    value = float(value)
    report.checks[name] = {
        "value": value,
        "tolerance": float(tolerance),
        "pass": bool(value < tolerance) if ok is None else bool(ok),
    }


def _phase_rows(alphas, decs):
    return [
        {"j": j, "alpha": float(a), "dynamical": float(d.dynamical), "geometric": float(d.geometric)}
        for j, (a, d) in enumerate(zip(alphas, decs))
    ]


def _verdict_dict(v):
    return {
        "det": [float(v.det.real), float(v.det.imag)],
        "det_phase": float(v.det_phase),
        "geometric_feasible": bool(v.geometric_feasible),
        "tolerance": float(v.tolerance),
    }


def _pipeline_gate(report, cfg, frame, gammas):
    v = gate_verdict(phase_gate(frame, gammas), cfg.tolerance)
    report.verdict = _verdict_dict(v)
    _check(report, "gate_feasible", abs(v.det - 1.0), cfg.tolerance, ok=v.geometric_feasible)


def _run_precession(cfg, report):
    omega = cfg.omega or 1.0
    T = cfg.duration or 2 * math.pi / omega
    h = Constant(models.precession(omega))
    frame = complete_frame([math.cos(cfg.theta / 2), math.sin(cfg.theta / 2)])
    decs = [phase_decomposition(trajectory(h, frame[j], T, cfg.steps)) for j in range(2)]
    gammas = [d.geometric for d in decs]
    expected = wrap_phase(-0.5 * omega * T * (1 - math.cos(cfg.theta)))
    report.phases = _phase_rows([d.total for d in decs], decs)
    report.residual_theorem2 = sum_residual(gammas)
    report.details["expected_geometric"] = expected
    report.details["solid_angle"] = 2 * math.pi * (1 - math.cos(cfg.theta))
    _check(report, "analytic_geometric", phase_distance(gammas[0], expected), cfg.tolerance)
    _check(report, "mirror", phase_distance(gammas[1], -gammas[0]), cfg.tolerance)
    _check(report, "theorem2", report.residual_theorem2, cfg.tolerance)
    _pipeline_gate(report, cfg, frame, gammas)


def _run_sum_rule(cfg, report, h, T):
    rep = sum_rule_check(h, T, cfg.steps, cfg.tolerance)
    report.phases = _phase_rows(rep.cyclic.alphas, rep.decompositions)
    report.residual_theorem2 = rep.residual
    report.details["degenerate"] = rep.cyclic.degenerate
    _check(report, "theorem2", rep.residual, cfg.tolerance)
    _pipeline_gate(report, cfg, rep.cyclic.frame, rep.phases)


def _run_random(cfg, report):
    h = Constant(models.random_hermitian(cfg.dim, cfg.seed))
    _run_sum_rule(cfg, report, h, cfg.duration or 1.0)


def _run_rotating(cfg, report):
    field_ = models.RotatingField(1.0 if cfg.omega0 is None else cfg.omega0, cfg.omega or 2.0)
    T = cfg.duration or field_.period
    err = float(np.max(np.abs(evolve(field_, T, cfg.steps) - field_.exact_propagator(T))))
    report.details["propagator_error"] = err
    _run_sum_rule(cfg, report, field_, T)
    _check(report, "propagator_error", err, cfg.tolerance)


def bloch_family(n_theta: int, n_phi: int, margin: float = BLOCH_MARGIN) -> FrameFamily:
    """Qubit frames on theta in [margin, pi - margin], phi in [0, 2 pi]."""
    theta = np.linspace(margin, math.pi - margin, n_theta)
    phi = np.linspace(0.0, 2 * math.pi, n_phi)
    frames = np.array([[bloch_frame(t, p).amps for p in phi] for t in theta])
    return FrameFamily(theta, phi, frames, periodic=(False, True))


def random_family(d: int, seed: int, n_a: int, n_b: int) -> FrameFamily:
    """exp(-i(a G1 + b G2)) frames on the unit square."""
    a = np.linspace(0.0, 1.0, n_a)
    b = np.linspace(0.0, 1.0, n_b)
    return FrameFamily(a, b, models.smooth_unitary_frames(d, seed, a, b))


def refinement_ok(coarse: float, fine: float, factor: float = 4.0) -> bool:
    if coarse < ROUNDOFF_FLOOR and fine < ROUNDOFF_FLOOR:
        return True
    return fine * factor <= coarse


def _run_frame_family(cfg, report):
    d = cfg.dim or 2
    na, nb = cfg.grid

    def build(n_a, n_b):
        return bloch_family(n_a, n_b) if d == 2 else random_family(d, cfg.seed, n_a, n_b)

    flux = two_form_field(build(na, nb))
    coarse, res_map = theorem1_residual(flux)
    fine, _ = theorem1_residual(two_form_field(build(2 * na - 1, 2 * nb - 1)))
    report.residual_theorem1 = coarse
    report.details["residual_theorem1_refined"] = fine
    report.details["family"] = "bloch" if d == 2 else "random-unitary"
    report.details["total_flux"] = [float(x) for x in flux.total()]
    _check(report, "theorem1", coarse, cfg.tolerance)
    _check(report, "theorem1_refinement", fine, coarse, ok=refinement_ok(coarse, fine))
    ca, cb = flux.centers
    for j in range(d):
        report.grids[f"flux_j{j}"] = (ca, cb, flux.flux[j])
    report.grids["residual"] = (ca, cb, res_map)


def _run_monopole(cfg, report):
    j = Fraction(cfg.spin)
    n_theta, n_phi = cfg.grid
    fam = sphere_family(models.radial_field(j), n_theta, n_phi)
    mono = chern_charges(fam)
    flux = two_form_field(fam)
    report.charges = [int(c) for c in mono.charges]
    report.details["raw_charges"] = [float(x) for x in mono.raw]
    report.details["gap_min"] = mono.gap_min
    expected = [int(2 * j - 2 * n) for n in range(int(2 * j) + 1)]
    report.details["expected_charges"] = expected
    report.residual_theorem1 = theorem1_residual(flux)[0]
    _check(report, "integer_defect", mono.defect, 1e-3)
    _check(report, "charge_sum", abs(mono.sum), 0.5, ok=mono.sum == 0)
    _check(report, "charges_expected", 0.0, 1.0, ok=report.charges == expected)
    ca, cb = flux.centers
    for n in range(fam.dim):
        report.grids[f"flux_j{n}"] = (ca, cb, flux.flux[n])
    report.grids["residual"] = (ca, cb, theorem1_residual(flux)[1])


def _run_loop(cfg, report):
    pts = parse_points(cfg.points or OCTANT)
    loop = measurement_loop(pts)
    phase = bargmann_phase(loop)
    report.details["bargmann_phase"] = phase
    report.details["points"] = len(loop)
    rev = bargmann_phase(loop.reversed())
    _check(report, "reversal", phase_distance(rev, -phase), cfg.tolerance)


def _run_gate(cfg, report):
    if cfg.gate == "hadamard":
        u = hadamard_gate(cfg.dim)
    elif cfg.gate == "identity":
        u = np.eye(cfg.dim)
    else:
        u = phase_gate(Frame.canonical(cfg.dim), cfg.gammas)
    v = gate_verdict(u, cfg.tolerance)
    report.verdict = _verdict_dict(v)
    _check(report, "gate_feasible", abs(v.det_phase), cfg.tolerance, ok=v.geometric_feasible)


_RUNNERS = {
    "precession": _run_precession,
    "random-hamiltonian": _run_random,
    "rotating-field": _run_rotating,
    "frame-family": _run_frame_family,
    "spin-monopole": _run_monopole,
    "measurement-loop": _run_loop,
    "gate-check": _run_gate,
}


def run_scenario(cfg: ScenarioConfig) -> RunReport:
    report = RunReport(scenario=cfg.echo())
    start = time.perf_counter()
    _RUNNERS[cfg.kind](cfg, report)
    report.timing_ms = 1e3 * (time.perf_counter() - start)
    return report


def override(cfg: ScenarioConfig, **kw) -> ScenarioConfig:
    """Apply command-line overrides, re-validating the result."""
    values = {k: v for k, v in asdict(cfg).items() if v is not None}
    values.update({k: v for k, v in kw.items() if v is not None})
    return validate(values)


# -- emitters -------------------------------------------------------------

FORMATS = ("json", "csv", "grid-tsv")


def to_json(report: RunReport, include_timing: bool = False) -> str:
    doc = {
        "format": {"float": FLOAT_FORMAT},
        "scenario": report.scenario,
        "phases": report.phases,
        "residual_theorem1": report.residual_theorem1,
        "residual_theorem2": report.residual_theorem2,
        "charges": report.charges,
        "verdict": report.verdict,
        "generator": report.generator,
        "timing_ms": report.timing_ms if include_timing else None,
        "checks": report.checks,
        "details": report.details,
        "passed": report.passed,
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def load_report(text: str) -> RunReport:
    doc = json.loads(text)
    return RunReport(
        scenario=doc["scenario"],
        phases=doc["phases"],
        residual_theorem1=doc["residual_theorem1"],
        residual_theorem2=doc["residual_theorem2"],
        charges=doc["charges"],
        verdict=doc["verdict"],
        generator=doc["generator"],
        timing_ms=doc["timing_ms"],
        checks=doc["checks"],
        details=doc["details"],
    )


def to_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["j", "alpha", "dynamical", "geometric"])
    for row in report.phases:
        writer.writerow([row["j"], repr(row["alpha"]), repr(row["dynamical"]), repr(row["geometric"])])
    return buf.getvalue()


def to_grid_tsv(report: RunReport) -> dict[str, str]:
    if not report.grids:
        raise ValueError(f"scenario {report.scenario.get('kind')!r} produces no grid data")
    docs = {}
    for name, (ca, cb, values) in report.grids.items():
        lines = [
            f"# scenario: {report.scenario.get('kind')}",
            f"# quantity: {name}",
            "# columns: a\tb\tvalue (plaquette centres)",
        ]
        for i, x in enumerate(ca):
            for k, y in enumerate(cb):
                lines.append(f"{float(x)!r}\t{float(y)!r}\t{float(values[i, k])!r}")
        docs[f"{name}.tsv"] = "\n".join(lines) + "\n"
    return docs


def emit(report: RunReport, fmt: str = "json", include_timing: bool = False) -> dict[str, str]:
    """Render a report; returns ``{file name: document text}``."""
    if fmt == "json":
        return {"report.json": to_json(report, include_timing)}
    if fmt == "csv":
        return {"phases.csv": to_csv(report)}
    if fmt == "grid-tsv":
        return to_grid_tsv(report)
    raise ValueError(f"unsupported format {fmt!r}; expected one of {', '.join(FORMATS)}")


BUILTINS = {
    "precession": ("Spin-1/2 precession about z at theta = pi/3", "kind = precession\ntheta = 1.0471975511965976\n"),
    "random-hamiltonian": ("Sum rule for a random d = 5 Hamiltonian", "kind = random-hamiltonian\ndim = 5\nseed = 11\nduration = 1.7\n"),
    "rotating-field": ("Qubit in a rotating field over one period", "kind = rotating-field\nomega0 = 1.0\nomega = 2.0\n"),
    "frame-family": ("Curvature cancellation for a random d = 4 frame family", "kind = frame-family\ndim = 4\nseed = 5\ngrid = 11x11\ntolerance = 1e-4\n"),
    "bloch-family": ("Curvature cancellation for the qubit frame family", "kind = frame-family\ndim = 2\ngrid = 64x32\n"),
    "spin-monopole": ("Chern numbers of spin-1 in a radial field", "kind = spin-monopole\nspin = 1\ngrid = 60x60\n"),
    "measurement-loop": ("Bargmann phase of the octant measurement triangle", f"kind = measurement-loop\npoints = {OCTANT}\n"),
    "hadamard-3": ("Determinant test for the qutrit Hadamard gate", "kind = gate-check\ngate = hadamard\ndim = 3\n"),
}
