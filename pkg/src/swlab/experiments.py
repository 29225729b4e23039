"""Scenario configuration, presets, batch runs and scheme comparison."""

from __future__ import annotations

import configparser
import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bottoms import BottomProfile, profile_from_spec
from .direct_method import (
    determine_phi, energy_identity_residual, random_block, random_divergence_expr,
    variational_euler_apply,
)
from .errors import ConfigError, SolverError
from .euler_scheme import (
    EulerState, SchemeFamily, family_coefficients, scheme_by_name, smooth_dam_profile,
    step_conservative,
)
from .lagrangian import (
    LagrangianScheme, LagrangianState, flat_scheme, linear_scheme, modified_parabolic_scheme,
    sq_lagr2_scheme, sq_lagr_scheme, static_equilibrium, step_tridiagonal,
)
from .mass_coordinates import build_mass_coordinate, sigmoid_dam, solve_alpha_cauchy
from .monitors import (
    ConservationReport, euler_layer_residuals, lagr_conservation_suite, total_energy,
)

EULER_SCHEMES = ("scm_sym", "scm_arb", "scm_naive", "family")
LAGR_SCHEMES = ("modified", "flat", "linear", "sq_lagr", "sq_lagr2")
INITIAL_KINDS = ("lake", "dam", "sigmoid_dam")
_NEEDS_L = ("parabolic", "parabolic_up", "shifted_parabola", "sinusoidal")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to reproduce one run.

    ``bottom`` and ``initial`` hold the keyword parameters of the bottom
    profile and of the initial condition, each with a ``kind`` entry.
    ``h`` is the mass step for Lagrangian runs.  ``eps`` defaults to 1e-6
    (Eulerian) or 1e-12 (Lagrangian).
    """

    name: str
    coordinates: str = "eulerian"
    scheme: str = "scm_sym"
    w11: float | None = None
    z12: float | None = None
    L: float = 100.0
    h: float = 0.1
    tau: float = 0.01
    T: float = 5.0
    bottom: dict = field(default_factory=lambda: {"kind": "flat"})
    initial: dict = field(default_factory=lambda: {"kind": "lake", "eta": 1.0})
    nu: float = 0.0
    eps: float | None = None
    max_iter: int | None = None
    viscosity_mode: str = "layer"
    snapshot_every: int = 0
    node_csv: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if self.coordinates not in ("eulerian", "lagrangian"):
            raise ConfigError(f"unknown coordinate system {self.coordinates!r}")
        allowed = EULER_SCHEMES if self.coordinates == "eulerian" else LAGR_SCHEMES
        if self.scheme not in allowed:
            raise ConfigError(f"scheme {self.scheme!r} not available in {self.coordinates} coordinates")
        if self.scheme == "family" and (self.w11 is None or self.z12 is None):
            raise ConfigError("scheme 'family' needs w11 and z12")
        for key in ("L", "h", "tau", "T"):
            v = getattr(self, key)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{key} must be positive, got {v!r}")
        if self.nu < 0:
            raise ConfigError("nu must be nonnegative")
        if self.eps is not None and not self.eps > 0:
            raise ConfigError("eps must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ConfigError("max_iter must be at least 1")
        if self.snapshot_every < 0:
            raise ConfigError("snapshot_every must be nonnegative")
        if self.viscosity_mode not in ("layer", "iteration"):
            raise ConfigError(f"unknown viscosity mode {self.viscosity_mode!r}")
        n = round(self.T / self.tau)
        if n < 1 or abs(n * self.tau - self.T) > 1e-12 * max(1.0, self.T):
            raise ConfigError(f"T = {self.T} is not a multiple of tau = {self.tau}")
        if self.coordinates == "eulerian":
            m = round(self.L / self.h)
            if m < 2 or abs(m * self.h - self.L) > 1e-9 * self.L:
                raise ConfigError(f"L = {self.L} is not a multiple of h = {self.h}")
        if "kind" not in self.bottom:
            raise ConfigError("bottom needs a kind")
        kind = self.initial.get("kind")
        if kind not in INITIAL_KINDS:
            raise ConfigError(f"unknown initial condition {kind!r}")
        need = {"lake": ("eta",), "dam": ("eta_left", "eta_right"),
                "sigmoid_dam": ("eta_left", "eta_right", "steepness")}[kind]
        missing = [k for k in need if k not in self.initial]
        if missing:
            raise ConfigError(f"initial condition {kind!r} needs {', '.join(missing)}")

    @property
    def steps(self) -> int:
        return int(round(self.T / self.tau))

    @property
    def tolerance(self) -> float:
        if self.eps is not None:
            return self.eps
        return 1e-6 if self.coordinates == "eulerian" else 1e-12

    @property
    def iteration_limit(self) -> int:
        if self.max_iter is not None:
            return self.max_iter
        return 200 if self.coordinates == "eulerian" else 50

    def bottom_profile(self) -> BottomProfile:
        params = {k: v for k, v in self.bottom.items() if k != "kind"}
        kind = str(self.bottom["kind"]).lower().replace("-", "_")
        if kind in _NEEDS_L:
            params.setdefault("L", self.L)
        try:
            return profile_from_spec(kind, **params)
        except TypeError as exc:
            raise ConfigError(f"bad bottom parameters: {exc}") from None

    def euler_family(self) -> SchemeFamily:
        if self.scheme == "family":
            return family_coefficients(float(self.w11), float(self.z12))
        return scheme_by_name(self.scheme)

    def lagrangian_scheme(self) -> LagrangianScheme:
        b = self.bottom
        kind = str(b["kind"]).lower().replace("-", "_")
        want = {"modified": "shifted_parabola", "flat": "flat", "linear": "linear",
                "sq_lagr": "parabolic_signed", "sq_lagr2": "parabolic_signed"}[self.scheme]
        if kind != want:
            raise ConfigError(f"scheme {self.scheme!r} needs a {want!r} bottom, got {kind!r}")
        if self.scheme == "modified":
            sch = modified_parabolic_scheme(float(b["d1"]), float(b.get("L", self.L)), self.tau)
        elif self.scheme == "flat":
            sch = flat_scheme()
        elif self.scheme == "linear":
            sch = linear_scheme(float(b["C1"]))
        else:
            if int(b.get("sign", 1 if self.scheme == "sq_lagr" else -1)) != (1 if self.scheme == "sq_lagr" else -1):
                raise ConfigError(f"scheme {self.scheme!r} fixes the parabola sign")
            make = sq_lagr_scheme if self.scheme == "sq_lagr" else sq_lagr2_scheme
            sch = make(self.tau, float(b.get("beta", 1.0)), float(b.get("c", 0.0)))
        return sch.with_viscosity(self.nu)

    def to_ini(self) -> str:
        main = {k: v for k, v in asdict(self).items() if k not in ("bottom", "initial")}
        lines = ["[scenario]"]
        lines += [f"{k} = {_ini_value(v)}" for k, v in main.items() if v is not None]
        for sec in ("bottom", "initial"):
            lines += ["", f"[{sec}]"]
            lines += [f"{k} = {_ini_value(v)}" for k, v in getattr(self, sec).items()]
        return "\n".join(lines) + "\n"


def _ini_value(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_scalar(text: str):
    t = text.strip()
    low = t.lower()
    if low in ("yes", "true", "on"):
        return True
    if low in ("no", "false", "off"):
        return False
    for conv in (int, float):
        try:
            return conv(t)
        except ValueError:
            pass
    return t


_FLOAT_KEYS = ("w11", "z12", "L", "h", "tau", "T", "nu", "eps")
_INT_KEYS = ("max_iter", "snapshot_every", "seed")


def config_from_ini(text: str, default_name: str = "scenario") -> ScenarioConfig:
    """Parse the ``[scenario]``, ``[bottom]`` and ``[initial]`` sections."""
    cp = configparser.ConfigParser()
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    if "scenario" not in cp:
        raise ConfigError("config needs a [scenario] section")
    raw = dict(cp["scenario"])
    known = {f for f in ScenarioConfig.__dataclass_fields__} - {"bottom", "initial"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown scenario keys: {', '.join(sorted(unknown))}")
    kw: dict = {"name": raw.pop("name", default_name)}
    try:
        for k, v in raw.items():
            if k in _FLOAT_KEYS:
                kw[k] = float(v)
            elif k in _INT_KEYS:
                kw[k] = int(v)
            elif k == "node_csv":
                kw[k] = cp["scenario"].getboolean(k)
            else:
                kw[k] = v.strip()
    except ValueError as exc:
        raise ConfigError(f"bad value in [scenario]: {exc}") from None
    for sec in ("bottom", "initial"):
        if sec in cp:
            kw[sec] = {k: _parse_scalar(v) for k, v in cp[sec].items()}
    return ScenarioConfig(**kw)


_PARAB = {"kind": "parabolic", "d1": 10.0}
_DAM = {"kind": "dam", "eta_left": 2.0, "eta_right": 0.5, "smoothing": 8}
_SHIFTED = {"kind": "shifted_parabola", "d1": 10.0}
_SIGMOID = {"kind": "sigmoid_dam", "eta_left": 2.0, "eta_right": 0.5, "steepness": 20.0}

PRESETS: dict[str, ScenarioConfig] = {
    "stationary-parabolic": ScenarioConfig(
        "stationary-parabolic", bottom=_PARAB, initial={"kind": "lake", "eta": 5.0}),
    "dambreak-parabolic": ScenarioConfig("dambreak-parabolic", bottom=_PARAB, initial=_DAM),
    "dambreak-parabolic-arb": ScenarioConfig(
        "dambreak-parabolic-arb", scheme="scm_arb", bottom=_PARAB, initial=_DAM),
    "dambreak-parabolic-naive": ScenarioConfig(
        "dambreak-parabolic-naive", scheme="scm_naive", bottom=_PARAB, initial=_DAM),
    "dambreak-parabolic-viscous": ScenarioConfig(
        "dambreak-parabolic-viscous", bottom=_PARAB, initial=_DAM, nu=0.08),
    "dambreak-sinusoidal": ScenarioConfig(
        "dambreak-sinusoidal", bottom={"kind": "sinusoidal", "d2": 2.0},
        initial={"kind": "dam", "eta_left": 2.5, "eta_right": 0.5, "smoothing": 8}, nu=0.15),
    "lagrangian-stationary": ScenarioConfig(
        "lagrangian-stationary", coordinates="lagrangian", scheme="modified", h=0.1,
        tau=0.01, T=5.0, bottom=_SHIFTED, initial={"kind": "lake", "eta": 5.0, "equilibrate": True}),
    "lagrangian-dambreak": ScenarioConfig(
        "lagrangian-dambreak", coordinates="lagrangian", scheme="modified", h=0.25,
        tau=0.00125, T=1.0, bottom=_SHIFTED, initial=_SIGMOID),
    "lagrangian-dambreak-viscous": ScenarioConfig(
        "lagrangian-dambreak-viscous", coordinates="lagrangian", scheme="modified", h=0.25,
        tau=0.00125, T=1.0, bottom=_SHIFTED, initial=_SIGMOID, nu=0.25),
}


def load_config(ref: str) -> ScenarioConfig:
    """Preset name or path to an INI file."""
    if ref in PRESETS:
        return PRESETS[ref]
    p = Path(ref)
    if not p.is_file():
        raise ConfigError(f"{ref!r} is neither a preset nor a config file")
    return config_from_ini(p.read_text(), default_name=p.stem)


# ---------------------------------------------------------------------------
# Running

@dataclass
class RunResult:
    config: ScenarioConfig
    report: ConservationReport
    layers: int
    iterations: list[int]
    x: np.ndarray
    final: dict[str, np.ndarray]
    status: str = "ok"
    error: str | None = None
    failed_layer: int | None = None

    def summary(self) -> dict:
        it = np.asarray(self.iterations, dtype=int)
        return {
            "scenario": self.config.name,
            "coordinates": self.config.coordinates,
            "scheme": self.config.scheme,
            "status": self.status,
            "error": self.error,
            "failed_layer": self.failed_layer,
            "layers": self.layers,
            "iterations": {"max": int(it.max(initial=0)), "total": int(it.sum())},
            "conservation": self.report.summary(),
        }


def _initial_eta(cfg: ScenarioConfig):
    ic = cfg.initial
    if ic["kind"] == "lake":
        eta = float(ic["eta"])
        return lambda x: np.full_like(np.asarray(x, dtype=float), eta)
    if ic["kind"] == "sigmoid_dam":
        return sigmoid_dam(float(ic["eta_left"]), float(ic["eta_right"]), cfg.L, float(ic["steepness"]))
    return None


class _FieldWriter:
    def __init__(self, out_dir: Path | None, every: int, last: int):
        self.out_dir, self.every, self.last = out_dir, every, last

    def wants(self, n: int) -> bool:
        if self.out_dir is None:
            return False
        return n in (0, self.last) or (self.every > 0 and n % self.every == 0)

    def write(self, n: int, x, u, eta, rho, H) -> None:
        with open(self.out_dir / f"fields_{n:06d}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["m", "x", "u", "eta", "rho", "H"])
            for m, row in enumerate(zip(x, u, eta, rho, H)):
                w.writerow([m, *(repr(float(v)) for v in row)])


def _run_euler(cfg: ScenarioConfig, writer: _FieldWriter) -> RunResult:
    M = int(round(cfg.L / cfg.h)) + 1
    x = np.arange(M) * cfg.h
    H = cfg.bottom_profile().H(x)
    ic = cfg.initial
    if ic["kind"] == "dam":
        eta = smooth_dam_profile(x, float(ic["eta_left"]), float(ic["eta_right"]),
                                 float(ic.get("center", cfg.L / 2)), int(ic.get("smoothing", 8)))
    else:
        eta = _initial_eta(cfg)(x)
    fam = cfg.euler_family()
    state = EulerState(0, np.zeros(M), eta, H, cfg.h, cfg.tau)
    rep = ConservationReport(energy=[total_energy(state)])
    res = RunResult(cfg, rep, 0, [], x, {})

    def snap(s: EulerState) -> None:
        res.final = {"u": s.u, "eta": s.eta, "rho": s.rho, "H": s.H}
        if writer.wants(s.n):
            writer.write(s.n, x, s.u, s.eta, s.rho, s.H)

    snap(state)
    for _ in range(cfg.steps):
        try:
            new, diag = step_conservative(state, fam, eps=cfg.tolerance, max_iter=cfg.iteration_limit,
                                          nu=cfg.nu, viscosity_mode=cfg.viscosity_mode)
        except SolverError as exc:
            res.status, res.error, res.failed_layer = "failed", str(exc), exc.layer
            return res
        for law, vals in euler_layer_residuals(fam, state, new).items():
            rep.add(law, state.n, vals)
        rep.energy.append(total_energy(new))
        res.iterations.append(diag.iterations)
        state = new
        res.layers = state.n
        snap(state)
    return res


def lagrangian_initial_positions(cfg: ScenarioConfig, scheme: LagrangianScheme) -> np.ndarray:
    """Particle positions at equal mass steps for the configured depth.

    The depth is ``eta - sigma H``: ``sigma H`` plays the role of the bed
    elevation in the force term.
    """
    bottom = scheme.bottom
    eta = _initial_eta(cfg)
    if eta is None:
        raise ConfigError("Lagrangian runs take a lake or sigmoid_dam initial condition")

    def rho(x):
        return eta(x) - scheme.sigma * bottom.H(x)

    mm = build_mass_coordinate(rho, cfg.L, cfg.L / 20000)
    x0 = solve_alpha_cauchy(lambda a: float(rho(a)), mm.total_mass, cfg.h)
    if cfg.initial["kind"] == "lake" and cfg.initial.get("equilibrate", False):
        x0 = static_equilibrium(x0, cfg.h, scheme)
    return x0


def _run_lagrangian(cfg: ScenarioConfig, writer: _FieldWriter) -> RunResult:
    scheme = cfg.lagrangian_scheme()
    x0 = lagrangian_initial_positions(cfg, scheme)
    hs, tau = cfg.h, cfg.tau
    traj = np.empty((cfg.steps + 1, x0.size))
    traj[0] = traj[1] = x0
    state = LagrangianState(x0, x0, hs, tau, scheme)
    res = RunResult(cfg, ConservationReport(), 1, [], x0, {})

    def snap(n: int) -> None:
        x = traj[n]
        u = (x - traj[n - 1]) / tau if n > 0 else np.zeros_like(x)
        rho = _node_density(x, hs)
        Hb = scheme.sigma * scheme.bottom.H(x)
        res.final = {"x": x, "u": u, "eta": rho + Hb, "rho": rho, "H": Hb}
        if writer.wants(n):
            writer.write(n, x, u, rho + Hb, rho, Hb)

    snap(0)
    snap(1)
    for n in range(2, cfg.steps + 1):
        try:
            state, diag = step_tridiagonal(state, cfg.tolerance, cfg.iteration_limit)
        except SolverError as exc:
            res.status, res.error, res.failed_layer = "failed", str(exc), exc.layer
            traj = traj[:n]
            break
        traj[n] = state.x_curr
        res.iterations.append(diag.iterations)
        res.layers = n
        snap(n)
    if traj.shape[0] >= 3:
        res.report = lagr_conservation_suite(traj, hs, tau, scheme)
    res.x = traj[-1]
    return res


def _node_density(x, hs: float) -> np.ndarray:
    """Depth at particles from neighbouring spacings (one-sided at the walls)."""
    d = np.diff(x)
    out = np.empty_like(x)
    out[1:-1] = 2.0 * hs / (d[:-1] + d[1:])
    out[0] = hs / d[0]
    out[-1] = hs / d[-1]
    return out


def run_scenario(cfg: ScenarioConfig, out_dir: str | Path | None = None) -> RunResult:
    """Run a scenario; with ``out_dir`` write fields, conservation, energy and summary files.

    Raises ``SolverError`` after writing partial output when a layer fails.
    """
    path = None if out_dir is None else Path(out_dir)
    if path is not None:
        path.mkdir(parents=True, exist_ok=True)
        for old in path.glob("fields_*.csv"):
            old.unlink()
        (path / "config.ini").write_text(cfg.to_ini(), newline="\n")
    writer = _FieldWriter(path, cfg.snapshot_every, cfg.steps)
    run = _run_euler if cfg.coordinates == "eulerian" else _run_lagrangian
    res = run(cfg, writer)
    if path is not None:
        res.report.write_conservation_csv(path / "conservation.csv")
        if res.report.energy:
            res.report.write_energy_csv(path / "energy.csv")
        if cfg.node_csv:
            res.report.write_node_csv(path / "conservation_nodes.csv")
        with open(path / "summary.json", "w", newline="\n") as fh:
            json.dump(res.summary(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    if res.status != "ok":
        raise SolverError(res.error or "solver failure")
    return res


# ---------------------------------------------------------------------------
# Comparison

@dataclass(frozen=True, eq=False)
class ComparisonTable:
    """Aligned energy drift and energy-law residual series of two runs."""

    name_a: str
    name_b: str
    time: np.ndarray
    e_R_a: np.ndarray
    e_R_b: np.ndarray
    max_a: np.ndarray
    max_b: np.ndarray

    @property
    def log_ratio(self) -> np.ndarray:
        """``log10(e_R_b / e_R_a)``; zero where the two agree exactly."""
        a, b = self.e_R_a, self.e_R_b
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.log10(b) - np.log10(a)
        return np.where(a == b, 0.0, r)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["layer", "t", "e_R_a", "e_R_b", "max_a", "max_b", "log_ratio"])
            for n, row in enumerate(zip(self.time, self.e_R_a, self.e_R_b, self.max_a,
                                        self.max_b, self.log_ratio)):
                w.writerow([n, *(repr(float(v)) for v in row)])


_MESH_KEYS = ("coordinates", "L", "h", "tau", "T", "bottom", "initial")


def compare_schemes(cfg_a: ScenarioConfig, cfg_b: ScenarioConfig) -> ComparisonTable:
    """Run both scenarios and align their energy diagnostics by layer."""
    diff = [k for k in _MESH_KEYS if getattr(cfg_a, k) != getattr(cfg_b, k)]
    if diff:
        raise ConfigError(f"scenarios differ in {', '.join(diff)}")
    ra, rb = run_scenario(cfg_a), run_scenario(cfg_b)
    eA, eB = ra.report.e_R, rb.report.e_R
    n = min(eA.size, eB.size)
    if n == 0:
        raise ConfigError("comparison needs an energy series")
    law = "energy"
    if law not in ra.report.residuals or law not in rb.report.residuals:
        raise ConfigError("comparison needs an energy law")
    mA = np.concatenate(([0.0], ra.report.max_by_layer(law)))[:n]
    mB = np.concatenate(([0.0], rb.report.max_by_layer(law)))[:n]
    t = np.arange(n) * cfg_a.tau
    return ComparisonTable(cfg_a.name, cfg_b.name, t, eA[:n], eB[:n], mA, mB)


# ---------------------------------------------------------------------------
# Identity verifier

@dataclass
class VerifierReport:
    lines: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, name: str, value: float, bound: float, where: str = "") -> None:
        ok = value <= bound
        self.lines.append(f"{name:<22} {'PASS' if ok else 'FAIL'}  max={value:.3e}  bound={bound:.1e}")
        if not ok:
            self.failures.append(f"{name}: {where}" if where else name)

    def text(self) -> str:
        tail = "all identity suites passed" if self.passed else "failing: " + "; ".join(self.failures)
        return "\n".join(self.lines + [tail]) + "\n"


def run_verifier(seed: int = 0, samples: int = 10_000, n_params: int = 10,
                 inject_b22: float | None = None) -> VerifierReport:
    """Energy identity, coefficient constraints, Euler operator and phi determination.

    ``inject_b22`` replaces ``B22`` in the coefficients fed to the identity
    (a negative control: any value other than 1/2 must fail).
    """
    if samples < 1:
        raise ConfigError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    rep = VerifierReport()

    worst, where = 0.0, ""
    for j in range(n_params):
        w11, z12 = rng.uniform(-1.0, 1.0, 2)
        h, tau = rng.uniform(0.05, 0.5, 2)
        block = random_block(rng, samples)
        fam = None if inject_b22 is None else family_coefficients(w11, z12, B22=inject_b22)
        r, s = energy_identity_residual(block, w11, z12, fam=fam, h=h, tau=tau)
        rel = np.abs(r) / s
        k = int(np.argmax(rel))
        if rel[k] > worst:
            worst, where = float(rel[k]), f"params {j} (w11={w11:.6g}, z12={z12:.6g}), sample {k}"
    rep.record("energy_identity", worst, 1e-12, where)

    worst, where = 0.0, ""
    for j in range(100):
        w11, z12 = rng.uniform(-5.0, 5.0, 2)
        fam = family_coefficients(w11, z12)
        dev = max(abs(v - 1.0) for v in fam.constraint_sums().values())
        dev = max(dev, abs(fam.B22 - 0.5), abs(fam.w11 + fam.b2111 - 0.5))
        if dev > worst:
            worst, where = dev, f"pair {j}"
    rep.record("coefficient_sums", worst, 1e-14, where)

    worst, where = 0.0, ""
    for j in range(min(samples, 100)):
        expr = random_divergence_expr(rng)
        fields = {"u": rng.uniform(0.5, 2.0, (7, 7)), "eta": rng.uniform(0.5, 2.0, (7, 7))}
        for wrt in ("u", "eta"):
            v = abs(variational_euler_apply(expr, fields, (3, 3), wrt, 0.3, 0.2))
            if v > worst:
                worst, where = v, f"expression {j} ({wrt})"
    rep.record("euler_operator", worst, 1e-7, where)

    worst, where = 0.0, ""
    for tau in (0.05, 0.1, 0.2):
        exact = 2.0 * (math.cosh(tau) - 1.0) / tau**2
        err = abs(determine_phi(tau, rng) - exact)
        if err > worst:
            worst, where = err, f"tau={tau}"
    rep.record("phi_determination", worst, 1e-6, where)
    return rep


__all__ = [
    "ScenarioConfig", "config_from_ini", "PRESETS", "load_config", "RunResult",
    "run_scenario", "lagrangian_initial_positions", "ComparisonTable", "compare_schemes",
    "VerifierReport", "run_verifier",
]
