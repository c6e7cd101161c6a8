"""Coupling configurations, seeded ensembles and the derived statistics.

Configurations (central qubits 0 and 1, environment 2..L-1):

* ``a`` -- both central qubits touch the two ends of one environment chain;
* ``b`` -- only qubit 1 touches the environment;
* ``c`` -- the environment is cut in the middle, giving each central qubit
  its own bath of (L-2)/2 qubits.
"""

from __future__ import annotations

import dataclasses
import logging
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from pairdecay import InsufficientData, InvalidInput
from pairdecay.floquet import PRESETS, ChainSpec, apply_step, compile_spec
from pairdecay.measures import concurrence, purity, reduce_to_pair, werner_concurrence_of_purity
from pairdecay.state import StateVector, make_bell, make_haar_random, make_initial_state

log = logging.getLogger(__name__)

CONFIGURATIONS = ("a", "b", "c")
THREADS_ENV = "PAIRDECAY_THREADS"
FIT_FLOOR = 1e-6
MIN_FIT_POINTS = 4


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to reproduce a run.

    ``regime`` names a preset from :data:`pairdecay.floquet.PRESETS`; use
    ``"custom"`` together with explicit ``b_perp``/``b_par``.  For presets the
    fields are filled in from the table.
    """

    configuration: str
    regime: str
    num_qubits: int
    coupling: float
    steps: int
    ensemble_size: int = 1
    seed: int = 0
    env_bond: float = 1.0
    record_stride: int = 1
    b_perp: Optional[float] = None
    b_par: Optional[float] = None

    def __post_init__(self):
        if self.configuration not in CONFIGURATIONS:
            raise InvalidInput(f"configuration: unknown value {self.configuration!r}")
        if self.regime == "custom":
            if self.b_perp is None or self.b_par is None:
                raise InvalidInput("regime: 'custom' needs both b_perp and b_par")
        elif self.regime in PRESETS:
            b_perp, b_par = PRESETS[self.regime]
            if self.b_perp is None:
                object.__setattr__(self, "b_perp", b_perp)
            if self.b_par is None:
                object.__setattr__(self, "b_par", b_par)
        else:
            raise InvalidInput(
                f"regime: unknown value {self.regime!r}, expected one of "
                f"{sorted(PRESETS)} or 'custom'")
        object.__setattr__(self, "b_perp", float(self.b_perp))
        object.__setattr__(self, "b_par", float(self.b_par))
        if self.num_qubits < 3:
            raise InvalidInput("num_qubits: need at least one environment qubit")
        if self.configuration == "c" and (self.num_qubits < 6 or self.num_qubits % 2):
            raise InvalidInput(
                f"num_qubits: configuration c needs L >= 6 with an even "
                f"environment, got L={self.num_qubits}")
        if self.steps < 0:
            raise InvalidInput("steps: must be >= 0")
        if self.ensemble_size < 1:
            raise InvalidInput("ensemble_size: must be >= 1")
        if self.record_stride < 1:
            raise InvalidInput("record_stride: must be >= 1")
        if self.seed < 0:
            raise InvalidInput("seed: must be non-negative")
        if abs(self.coupling) > 0.5 * abs(self.env_bond):
            warnings.warn(
                f"coupling {self.coupling} is not weak compared to env_bond "
                f"{self.env_bond}", stacklevel=2)

    def replace(self, **changes) -> "ExperimentSpec":
        if "regime" in changes and changes["regime"] != "custom":
            changes.setdefault("b_perp", None)
            changes.setdefault("b_par", None)
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class TrajectoryRecord:
    t: np.ndarray
    concurrence: np.ndarray
    purity: np.ndarray
    seed: int
    spec: ExperimentSpec


@dataclass
class EnsembleSummary:
    t: np.ndarray
    c_mean: np.ndarray
    c_var: np.ndarray
    p_mean: np.ndarray
    p_var: np.ndarray

    @property
    def cp_points(self) -> np.ndarray:
        return np.column_stack([self.c_mean, self.p_mean])


def derive_seed(master: int, *counters: int) -> int:
    """Seed for member ``counters`` of ``master``; independent of run order."""
    ss = np.random.SeedSequence(entropy=master, spawn_key=tuple(counters))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def cut_bond(num_qubits: int) -> int:
    """Bond removed in configuration c, splitting the environment evenly."""
    return 1 + (num_qubits - 2) // 2


def build_configuration(spec: ExperimentSpec) -> ChainSpec:
    L = spec.num_qubits
    bonds = [spec.env_bond] * L
    bonds[0] = 0.0
    bonds[1] = spec.coupling
    bonds[L - 1] = spec.coupling
    if spec.configuration == "b":
        bonds[L - 1] = 0.0
    elif spec.configuration == "c":
        if (L - 2) % 2:
            raise InvalidInput(f"configuration c needs an even environment, L={L}")
        bonds[cut_bond(L)] = 0.0
    return ChainSpec(L, tuple(bonds), spec.b_perp, spec.b_par)


def halves(spec: ExperimentSpec) -> tuple[list[int], list[int]]:
    """The two disconnected qubit sets of configuration c."""
    L = spec.num_qubits
    k = cut_bond(L)
    return [1] + list(range(2, k + 1)), [0] + list(range(k + 1, L))


def initial_state(spec: ExperimentSpec, seed: int) -> StateVector:
    n_env = spec.num_qubits - 2
    if spec.configuration == "c":
        env = [make_haar_random(n_env // 2, derive_seed(seed, block)) for block in (0, 1)]
    else:
        env = make_haar_random(n_env, seed)
    return make_initial_state(make_bell(), env)


Observer = Callable[[int, StateVector], None]


def run_trajectory(spec: ExperimentSpec, seed: int,
                   observer: Optional[Observer] = None) -> TrajectoryRecord:
    """Evolve one Bell (x) random initial condition and record (C, P).

    Points are taken at every multiple of ``record_stride`` up to ``steps``,
    starting with t=0.  ``observer(t, state)`` is called at the same times.
    """
    op = compile_spec(build_configuration(spec))
    state = initial_state(spec, seed)
    times = np.arange(0, spec.steps + 1, spec.record_stride)
    cs = np.empty(times.size)
    ps = np.empty(times.size)
    t_now = 0
    for k, t in enumerate(times):
        apply_step(state, op, int(t - t_now))
        t_now = t
        rho = reduce_to_pair(state)
        cs[k] = concurrence(rho)
        ps[k] = purity(rho)
        if observer is not None:
            observer(int(t), state)
    return TrajectoryRecord(times, cs, ps, seed, spec)


def _member(args):
    spec, seed = args
    return run_trajectory(spec, seed)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def summarize(records: Sequence[TrajectoryRecord]) -> EnsembleSummary:
    c = np.array([r.concurrence for r in records])
    p = np.array([r.purity for r in records])
    return EnsembleSummary(records[0].t.copy(), c.mean(0), c.var(0), p.mean(0), p.var(0))


def run_ensemble(spec: ExperimentSpec, workers: Optional[int] = None
                 ) -> tuple[EnsembleSummary, list[TrajectoryRecord]]:
    """Run ``spec.ensemble_size`` members with seeds derived from ``spec.seed``.

    Results do not depend on ``workers``; each member owns its state and the
    aggregation happens in member order.
    """
    workers = default_workers() if workers is None else workers
    jobs = [(spec, derive_seed(spec.seed, i)) for i in range(spec.ensemble_size)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_member, jobs))
    else:
        records = [_member(job) for job in jobs]
    return summarize(records), records


def fit_power_law(t, x, window=(3, 30), skip_zero=True):
    """Fit ``1 - x(t) = a * t**gamma`` on a log-log scale over ``window``.

    Points with ``1 - x <= 1e-6`` are dropped.  With ``skip_zero`` so are
    points where ``x`` is exactly zero: a concurrence clamped at zero pins
    ``1 - C`` to one and says nothing about the decay law.  Returns
    ``(gamma, a)``.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    lo, hi = window
    if lo <= 0 or hi <= lo:
        raise InvalidInput(f"window {window} must satisfy 0 < t_min < t_max")
    if t.size == 0 or lo < t.min() or hi > t.max():
        raise InvalidInput(f"window {window} outside recorded range")
    y = 1.0 - x
    keep = (t >= lo) & (t <= hi) & (y > FIT_FLOOR)
    if skip_zero:
        keep &= x != 0.0
    if keep.sum() < MIN_FIT_POINTS:
        raise InsufficientData(
            f"only {int(keep.sum())} usable points in window {window}")
    gamma, log_a = np.polyfit(np.log(t[keep]), np.log(y[keep]), 1)
    return float(gamma), float(np.exp(log_a))


def fit_decay_exponent(record, window=(3, 30), of="concurrence"):
    """Decay exponent of ``1 - C`` (or ``1 - P``) for a trajectory or ensemble mean."""
    if of not in ("concurrence", "purity"):
        raise InvalidInput(f"cannot fit {of!r}")
    if isinstance(record, EnsembleSummary):
        x = record.c_mean if of == "concurrence" else record.p_mean
    else:
        x = record.concurrence if of == "concurrence" else record.purity
    return fit_power_law(record.t, x, window, skip_zero=of == "concurrence")


def cp_curve_deviation(points, p_range=(0.5, 1.0)) -> float:
    """RMS distance in C between (C, P) points and the Werner curve.

    ``points`` is an :class:`EnsembleSummary` (mean points are used), a
    :class:`TrajectoryRecord`, or an (n, 2) array of (C, P) rows.  Only
    points with P inside ``p_range`` count.
    """
    if isinstance(points, EnsembleSummary):
        c, p = points.c_mean, points.p_mean
    elif isinstance(points, TrajectoryRecord):
        c, p = points.concurrence, points.purity
    else:
        arr = np.asarray(points, dtype=float)
        c, p = arr[:, 0], arr[:, 1]
    lo, hi = p_range
    mask = (p >= lo) & (p <= hi)
    if not mask.any():
        raise InsufficientData(f"no points with purity in {p_range}")
    diff = c[mask] - werner_concurrence_of_purity(p[mask])
    return float(np.sqrt(np.mean(diff ** 2)))


SIZE_SCAN_STRIDE = 125


def size_scan(base_spec: ExperimentSpec, env_sizes: Sequence[int],
              p_range=(0.5, 1.0), workers: Optional[int] = None
              ) -> list[tuple[int, float]]:
    """Werner-curve deviation of one trajectory per environment size.

    Sizes count environment qubits, so the chain has ``n + 2`` qubits.  The
    chaotic preset and a 125-step record stride are imposed; coupling, steps
    and seed come from ``base_spec``.  The same seed is used for every size.
    """
    for n in env_sizes:
        if n < 3:
            raise InvalidInput(f"environment size {n} < 3")
    specs = [base_spec.replace(num_qubits=n + 2, regime="chaotic", ensemble_size=1,
                               record_stride=SIZE_SCAN_STRIDE)
             for n in env_sizes]
    workers = default_workers() if workers is None else workers
    jobs = [(s, base_spec.seed) for s in specs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_member, jobs))
    else:
        records = [_member(job) for job in jobs]
    return [(n, cp_curve_deviation(rec, p_range)) for n, rec in zip(env_sizes, records)]


def half_purity_check(state: StateVector, partition: Sequence[int],
                      chain: ChainSpec) -> float:
    """Purity of the reduced state on ``partition``, via Schmidt coefficients.

    ``partition`` must not be joined to the rest of the chain by any nonzero
    bond of ``chain``.
    """
    L = state.num_qubits
    part = sorted(set(int(q) for q in partition))
    if not part or part[0] < 0 or part[-1] >= L:
        raise InvalidInput(f"partition {partition} is not a subset of 0..{L - 1}")
    if chain.num_qubits != L:
        raise InvalidInput("chain and state sizes differ")
    inside = set(part)
    for j, J in enumerate(chain.bonds):
        a, b = chain.bond_qubits(j)
        if J != 0.0 and (a in inside) != (b in inside):
            raise InvalidInput(f"bond {j} (J={J}) crosses the partition")
    rest = [q for q in range(L) if q not in inside]
    # tensor axis k holds qubit L-1-k
    tensor = state.amplitudes.reshape((2,) * L)
    axes = [L - 1 - q for q in part] + [L - 1 - q for q in rest]
    m = tensor.transpose(axes).reshape(1 << len(part), -1)
    s = np.linalg.svd(m, compute_uv=False)
    return float(np.sum(s ** 4))
