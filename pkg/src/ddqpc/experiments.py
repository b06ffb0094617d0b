"""Scenario runners for the double-dot / point-contact simulations.

Each runner takes a :class:`ScenarioConfig` and returns a
:class:`ScenarioResult` whose first column is the independent variable
(``tau``, or ``alpha`` for the coupling search).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from . import channels
from .dynamics import (
    GeneratorParams,
    InitialStateParams,
    TimeGrid,
    evolve_batch,
    initial_state,
)
from .entanglement import (
    EntropySeries,
    concurrence,
    entropies,
    entropy_of_formation,
    threshold_time,
)
from .errors import InvalidState, NumericalFailure
from .linalg import I2, PROJ_L, PROJ_R, as_matrix, frobenius_distance, singlet

SCENARIOS = ("single_dd", "optimal_coupling", "singlet_pair", "measure_compare", "tomography_dump")
THRESHOLD_LEVELS = (0.90, 0.95, 0.99)
DISENTANGLED_C = 1e-3
PAIR_SATURATION_FRACTION = 0.9
CROSS_PATH_TOL = 1e-6


@dataclass
class OutputSpec:
    csv: str | None = None
    svg: str | None = None


@dataclass
class ScenarioConfig:
    scenario: str
    alpha: float | None = 5.0
    alpha_grid: list[float] | None = None
    theta_deg: float = 0.0
    phi_deg: float = 0.0
    delta: float = 0.0
    tau_max: float = 10.0
    dt: float = 1e-3
    stride: int = 100
    threshold_level: float = 0.95
    thorough: bool = False
    output: OutputSpec = field(default_factory=OutputSpec)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.scenario == "optimal_coupling":
            if not self.alpha_grid or len(self.alpha_grid) < 3:
                raise ValueError("optimal_coupling needs an alpha_grid of at least 3 values")
            if any(b <= a for a, b in zip(self.alpha_grid, self.alpha_grid[1:])):
                raise ValueError("alpha_grid must be strictly ascending")
            if self.alpha_grid[0] < 0:
                raise ValueError("alpha values must be >= 0")
        elif self.alpha is None or self.alpha < 0:
            raise ValueError(f"{self.scenario} needs a scalar alpha >= 0")
        if not self.threshold_level > 0:
            raise ValueError("threshold_level must be > 0")
        self.grid  # validates tau_max, dt and stride

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(self.tau_max, self.dt, self.stride)

    @property
    def fine_grid(self) -> TimeGrid:
        return TimeGrid(self.tau_max, self.dt, 1)

    @property
    def initial(self) -> InitialStateParams:
        return InitialStateParams(math.radians(self.theta_deg), math.radians(self.phi_deg))

    def generator(self, alpha: float | None = None) -> GeneratorParams:
        return GeneratorParams.normalized(self.alpha if alpha is None else alpha, self.delta)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def default_config(scenario: str, **overrides) -> ScenarioConfig:
    """Config with the per-scenario defaults (alpha 20 and a long horizon for the pair runs)."""
    base: dict = {}
    if scenario in ("singlet_pair", "measure_compare"):
        base["alpha"] = 20.0
    if scenario == "measure_compare":
        base["tau_max"] = 200.0
    if scenario == "optimal_coupling":
        base["alpha_grid"] = log_grid(0.5, 50.0, 25)
        base["tau_max"] = 40.0
    base.update(overrides)
    return ScenarioConfig(scenario=scenario, **base)


def log_grid(start: float, stop: float, n: int) -> list[float]:
    """``n`` log-spaced values including both endpoints, rounded to 12 digits."""
    return [float(f"{v:.12g}") for v in np.geomspace(start, stop, n)]


@dataclass
class ScenarioResult:
    columns: dict[str, np.ndarray]
    metadata: dict
    summary: dict

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError("all result columns must have the same length")

    @property
    def index_name(self) -> str:
        return next(iter(self.columns))


def _rate_full(values: np.ndarray, step: float) -> np.ndarray:
    return np.gradient(values, step, edge_order=2)


def _first_crossing_down(taus, values, level):
    hits = np.nonzero(values <= level)[0]
    if hits.size == 0:
        return None
    i = int(hits[0])
    if i == 0:
        return float(taus[0])
    t0, t1, v0, v1 = taus[i - 1], taus[i], values[i - 1], values[i]
    return float(t0 + (v0 - level) * (t1 - t0) / (v0 - v1))


def run_single_dd(cfg: ScenarioConfig) -> ScenarioResult:
    """Entropy and entanglement rate of one double dot watched by the detector.

    Entropy and rate are evaluated at every integrator step, then decimated
    to the output stride, so the rate column is a genuine derivative at each
    output time and the threshold times are resolved to one step.
    """
    fine = cfg.fine_grid
    traj = evolve_batch([initial_state(cfg.initial)], cfg.generator(), fine)[0]
    s = entropies(traj.states)
    r = _rate_full(s, fine.step)
    series = EntropySeries(traj.taus, s)
    summary = {f"tau_E_{lvl:.2f}": threshold_time(series, lvl) for lvl in THRESHOLD_LEVELS}
    summary["tau_E"] = threshold_time(series, cfg.threshold_level)
    summary["R_initial"] = float(r[1])
    summary["S_final"] = float(s[-1])
    k = cfg.stride
    return ScenarioResult(
        {"tau": traj.taus[::k], "S": s[::k], "R": r[::k]}, cfg.to_dict(), summary
    )


def find_optimal_coupling(cfg: ScenarioConfig) -> ScenarioResult:
    """Grid search over alpha for the shortest time to reach the entropy level.

    Couplings that never reach the level within ``tau_max`` are reported as
    NaN and left out of the argmin.
    """
    alphas = list(cfg.alpha_grid)
    sigma0 = initial_state(cfg.initial)
    trajs = evolve_batch(
        [sigma0] * len(alphas), [cfg.generator(a) for a in alphas], cfg.fine_grid
    )
    tau_e = []
    for traj in trajs:
        t = threshold_time(EntropySeries(traj.taus, entropies(traj.states)), cfg.threshold_level)
        tau_e.append(np.nan if t is None else t)
    tau_e = np.array(tau_e)
    reached = np.isfinite(tau_e)
    summary: dict = {"unreached": [a for a, ok in zip(alphas, reached) if not ok]}
    if reached.any():
        i = int(np.nanargmin(tau_e))
        summary.update(
            alpha_opt=alphas[i],
            tau_E_opt=float(tau_e[i]),
            interior_minimum=bool(0 < i < len(alphas) - 1),
        )
    else:
        summary.update(alpha_opt=None, tau_E_opt=None, interior_minimum=False)
    return ScenarioResult(
        {"alpha": np.array(alphas), "tau_E": tau_e}, cfg.to_dict(), summary
    )


def collapse_average(rho) -> np.ndarray:
    """Unread projective measurement of dot 1 in the {L, R} basis.

    Each branch ``(X (x) I) rho (X (x) I)`` is renormalized and weighted by its
    Born probability; branches with probability <= 1e-12 are dropped.
    """
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("collapse_average expects a 4x4 state")
    out = np.zeros((4, 4), dtype=complex)
    total = 0.0
    for proj in (PROJ_L, PROJ_R):
        x = np.kron(proj, I2)
        p = float(np.trace(x @ rho).real)
        if p > 1e-12:
            branch = x @ rho @ x
            out += p * branch / np.trace(branch).real
            total += p
    if total == 0.0:
        raise InvalidState("both collapse branches have zero probability")
    return out


def _cross_path_check(cfg, pair_traj, rho0):
    """Compare Choi-applied evolution of ``rho0`` with direct 4x4 integration."""
    probes = channels.probe_trajectories(cfg.generator(), cfg.grid)
    n = len(pair_traj)
    idx = range(n) if cfg.thorough else sorted(set(np.linspace(0, n - 1, 5).astype(int)))
    worst = 0.0
    for i in idx:
        j = channels.choi_from_probe_outputs(*(p.states[i] for p in probes))
        dev = float(np.max(np.abs(channels.apply_one_sided(j, rho0) - pair_traj.states[i])))
        worst = max(worst, dev)
        if dev > CROSS_PATH_TOL:
            raise NumericalFailure(
                f"Choi path and direct integration differ by {dev:.3e} > {CROSS_PATH_TOL:g}",
                tau=float(pair_traj.taus[i]),
            )
    return worst


def run_singlet_pair(cfg: ScenarioConfig) -> ScenarioResult:
    """Singlet pair with only the first double dot coupled to the detector.

    ``EoF`` and ``C`` measure entanglement between the two dots; ``S_pair``
    is the entropy of the pair state, i.e. its entanglement with the detector.
    """
    rho0 = singlet()
    fine = evolve_batch([rho0], cfg.generator(), cfg.fine_grid)[0]
    c = np.array([concurrence(r) for r in fine.states])
    s_pair = entropies(fine.states)
    eof = np.array([entropy_of_formation(r) for r in fine.states])
    tau_d = _first_crossing_down(fine.taus, c, DISENTANGLED_C)
    sat = float(s_pair[-1])
    tau_e2 = threshold_time(EntropySeries(fine.taus, s_pair), PAIR_SATURATION_FRACTION * sat) if sat > 0 else None
    k = cfg.stride
    coarse = dataclasses.replace(fine, grid=cfg.grid, taus=fine.taus[::k], states=fine.states[::k])
    summary = {
        "tau_D": tau_d,
        "tau_E2": tau_e2,
        "ratio_E2_D": tau_e2 / tau_d if tau_d and tau_e2 else None,
        "S_pair_final": sat,
        "EoF_final": float(eof[-1]),
        "cross_path_max_dev": _cross_path_check(cfg, coarse, rho0),
    }
    return ScenarioResult(
        {"tau": coarse.taus, "EoF": eof[::k], "S_pair": s_pair[::k], "C": c[::k]},
        cfg.to_dict(),
        summary,
    )


def run_measure_compare(cfg: ScenarioConfig) -> ScenarioResult:
    """Unitary-plus-detector evolution of the singlet against its collapsed average."""
    rho0 = singlet()
    rho_m0 = collapse_average(rho0)
    direct, measured = evolve_batch([rho0, rho_m0], cfg.generator(), cfg.grid)
    d = np.array([frobenius_distance(a, b) for a, b in zip(direct.states, measured.states)])
    eof_s = np.array([entropy_of_formation(r) for r in direct.states])
    eof_m = np.array([entropy_of_formation(r) for r in measured.states])
    i_max = int(np.argmax(d))
    summary = {
        "D_0": float(d[0]),
        "D_final": float(d[-1]),
        "D_max": float(d[i_max]),
        "tau_at_D_max": float(direct.taus[i_max]),
        "EoF_schrodinger_final": float(eof_s[-1]),
        "EoF_measured_final": float(eof_m[-1]),
        "cross_path_max_dev": _cross_path_check(cfg, direct, rho0),
    }
    return ScenarioResult(
        {"tau": direct.taus, "D": d, "EoF_schrodinger": eof_s, "EoF_measured": eof_m},
        cfg.to_dict(),
        summary,
    )


def choi_column_names() -> list[str]:
    names = []
    for r in range(4):
        for c in range(4):
            names += [f"J{r}{c}_re", f"J{r}{c}_im"]
    return names


def run_tomography_dump(cfg: ScenarioConfig) -> ScenarioResult:
    probes = channels.probe_trajectories(cfg.generator(), cfg.grid)
    chois = channels.chois_from_trajectories(probes)
    reports = [channels.verify_cptp(j) for j in chois]
    cols: dict[str, np.ndarray] = {"tau": probes[0].taus}
    flat = chois.reshape(len(chois), 16)
    for k, name in enumerate(choi_column_names()):
        part = flat[:, k // 2]
        cols[name] = part.real if k % 2 == 0 else part.imag
    for key in channels.CptpReport._fields:
        cols[key] = np.array([getattr(rep, key) for rep in reports])
    summary = {
        "worst_min_eigenvalue": float(cols["min_eigenvalue"].min()),
        "worst_tp_deviation": float(cols["tp_deviation"].max()),
        "worst_hermiticity_deviation": float(cols["hermiticity_deviation"].max()),
    }
    return ScenarioResult(cols, cfg.to_dict(), summary)


RUNNERS = {
    "single_dd": run_single_dd,
    "optimal_coupling": find_optimal_coupling,
    "singlet_pair": run_singlet_pair,
    "measure_compare": run_measure_compare,
    "tomography_dump": run_tomography_dump,
}


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    return RUNNERS[cfg.scenario](cfg)
