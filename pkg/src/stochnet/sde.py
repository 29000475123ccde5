"""Euler-Maruyama integration of the full network system and the scalar
effective equation, with reproducible seeded ensembles.

Reproducibility contract: realization r of a run with master seed s draws
from the stream SeedSequence([s, 0, r]) -- initial condition first (when the
initializer is per-realization), then step noise in fixed-size chunks of
CHUNK_STEPS steps. Chunk size is a constant, never a function of thread
count, and numpy Generator streams yield identical values regardless of how
draws are batched, so noise values are independent of scheduling. For
multidimensional systems realizations are additionally integrated in blocks
of a fixed height (FULL_BLOCK), because the batched matrix product in the
drift sums in a shape-dependent order; with block layout a pure function of
the realization count, outputs are byte-identical for every thread count.
Auxiliary streams: SeedSequence([s, 1]) for network/parameter draws,
SeedSequence([s, 2]) for a shared initial condition, SeedSequence([s, 3, r])
for the noise of initializer-matched effective realizations.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import numpy.polynomial.polynomial as nppoly

from .dynamics import NodeDynamics, full_diffusion, full_drift
from .errors import BlowUp, DimensionMismatch, InvalidParameter, NonFiniteState
from .network import NetworkMatrix
from .reduction import EffectiveModel

BLOWUP_GUARD = 1e12
CHUNK_STEPS = 1000
FULL_BLOCK = 64


@dataclass(frozen=True)
class IntegrationSpec:
    dt: float
    t_end: float
    record_every: int = 500
    seed: int = 0
    realizations: int = 1

    def __post_init__(self):
        if self.dt <= 0:
            raise InvalidParameter(f"dt must be positive, got {self.dt}")
        if self.t_end < self.dt:
            raise InvalidParameter("t_end must be at least dt")
        if self.record_every < 1:
            raise InvalidParameter("record_every must be >= 1")
        if self.realizations < 1:
            raise InvalidParameter("realizations must be >= 1")

    @property
    def steps(self):
        return int(round(self.t_end / self.dt))

    @property
    def n_records(self):
        return self.steps // self.record_every + 1

    def times(self):
        return np.arange(self.n_records) * (self.dt * self.record_every)


@dataclass(frozen=True)
class Path:
    times: np.ndarray
    states: np.ndarray  # (time points, dimension)

    def __post_init__(self):
        states = np.asarray(self.states, dtype=float)
        if states.ndim == 1:
            states = states[:, None]
        object.__setattr__(self, "states", states)
        if states.shape[0] != len(self.times):
            raise DimensionMismatch("states row count must match times")


@dataclass(frozen=True)
class Ensemble:
    """R realization paths on one time grid.

    states has shape (R, time points, dimension); dimension is 1 for
    effective-equation ensembles. failures maps a realization index to the
    time its trajectory exceeded the blow-up guard; its recorded states are
    NaN from that time on.
    """

    spec: IntegrationSpec
    times: np.ndarray
    states: np.ndarray
    failures: dict = field(default_factory=dict)

    @property
    def n_realizations(self):
        return self.states.shape[0]

    @property
    def dim(self):
        return self.states.shape[2]

    def path(self, r: int) -> Path:
        return Path(times=self.times, states=self.states[r])


def substream(seed: int, *key) -> np.random.Generator:
    """Documented stream derivation: Generator(PCG64(SeedSequence([seed, *key])))."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


def realization_stream(seed: int, r: int) -> np.random.Generator:
    return substream(seed, 0, r)


def uniform_initializer(lo: float = 0.0, hi: float = 1.0) -> Callable:
    """Draw each component uniformly from [lo, hi)."""

    def init(gen: np.random.Generator, dim: int):
        draws = gen.uniform(lo, hi, dim)
        return draws if dim > 1 else float(draws[0])

    return init


def projected_initializer(weights, lo: float = 0.0, hi: float = 1.0) -> Callable:
    """Scalar initializer matching a full-system realization: draws the same
    per-node uniform vector the full system would draw from the stream, then
    projects it with the mean-field weights."""
    w = np.asarray(weights, dtype=float)

    def init(gen: np.random.Generator, dim: int):
        return float(w @ gen.uniform(lo, hi, len(w)))

    return init


def _drift_full(dyn: NodeDynamics, net: NetworkMatrix):
    A = net.weights
    if dyn.drift_batch is not None:
        fn = dyn.drift_batch
        return lambda X: fn(X, A)

    def generic(X):
        # nan rows mark single-realization failures without aborting the block
        rows = []
        for row in X:
            try:
                rows.append(full_drift(dyn, net, row))
            except NonFiniteState:
                rows.append(np.full(len(row), np.nan))
        return np.stack(rows)

    return generic


def _diff_full(dyn: NodeDynamics):
    if dyn.diffusion_batch is not None:
        return dyn.diffusion_batch

    def generic(X):
        rows = []
        for row in X:
            try:
                rows.append(full_diffusion(dyn, row))
            except NonFiniteState:
                rows.append(np.full(len(row), np.nan))
        return np.stack(rows)

    return generic


def _drift_eff(eff: EffectiveModel):
    # drift = B(x) + a_eff * C(x); combining the coefficients up front
    # halves the per-step polynomial evaluations
    m = max(len(eff.b_eff), len(eff.c_eff))
    combined = np.zeros(m)
    combined[: len(eff.b_eff)] += eff.b_eff
    combined[: len(eff.c_eff)] += eff.a_eff * eff.c_eff
    return lambda x: nppoly.polyval(x, combined)


def _diff_eff(eff: EffectiveModel):
    return lambda x: nppoly.polyval(x, eff.d_eff)


def _integrate_block(
    gens,
    x0_block,
    drift_fn,
    diff_fn,
    spec: IntegrationSpec,
    clamp: bool,
    noise_dim: int,
    out,
    failures,
    offset: int,
):
    """Step a block of realizations; writes records into out[r] rows.

    Noise is drawn per realization from its own generator in fixed chunks,
    so values are independent of block partitioning.
    """
    B = len(gens)
    X = np.array(x0_block, dtype=float)
    scalar = noise_dim == 1 and X.ndim == 1
    out[:, 0] = X[:, None] if scalar else X
    active = np.ones(B, dtype=bool)
    all_active = True
    fail_time = np.full(B, np.nan)
    dt, sqdt = spec.dt, np.sqrt(spec.dt)
    steps, rec = spec.steps, spec.record_every
    rec_i = 1
    done = 0
    with np.errstate(over="ignore", invalid="ignore"):
        while done < steps:
            chunk = min(CHUNK_STEPS, steps - done)
            if scalar:
                Z = np.stack([g.standard_normal(chunk) for g in gens])
            else:
                Z = np.stack([g.standard_normal((chunk, noise_dim)) for g in gens])
            Z *= sqdt
            for k in range(chunk):
                z = Z[:, k] if scalar else Z[:, k, :]
                Xn = X + drift_fn(X) * dt + diff_fn(X) * z
                if clamp:
                    np.maximum(Xn, 0.0, out=Xn)
                # the guard comparison is False for NaN entries too, so one
                # test catches both overflow and non-finite states
                ok = np.abs(Xn) <= BLOWUP_GUARD
                ok_rows = ok if scalar else ok.all(axis=1)
                if all_active and ok_rows.all():
                    X = Xn
                else:
                    newly = active & ~ok_rows
                    if newly.any():
                        fail_time[newly] = (done + k + 1) * dt
                        active &= ~newly
                        all_active = False
                        Xn[newly] = 0.0
                    # freeze failed realizations, keep the rest going
                    X = np.where(active if scalar else active[:, None], Xn, X)
                if (done + k + 1) % rec == 0:
                    row = X[:, None] if scalar else X
                    if all_active:
                        out[:, rec_i] = row
                    else:
                        out[:, rec_i] = np.where(active[:, None], row, np.nan)
                    rec_i += 1
            done += chunk
    for b in range(B):
        if not np.isnan(fail_time[b]):
            failures[offset + b] = float(fail_time[b])


def integrate_full(
    dyn: NodeDynamics,
    net: NetworkMatrix,
    x0,
    spec: IntegrationSpec,
    realization_index: int = 0,
) -> Path:
    """One full-system path from an explicit initial state. Noise comes from
    the realization substream; raises BlowUp if the guard trips."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (dyn.n,):
        raise DimensionMismatch("x0 must have one entry per node")
    if net.n != dyn.n:
        raise DimensionMismatch("network and dynamics sizes must agree")
    gen = realization_stream(spec.seed, realization_index)
    out = np.empty((1, spec.n_records, dyn.n))
    failures = {}
    _integrate_block(
        [gen],
        x0[None, :],
        _drift_full(dyn, net),
        _diff_full(dyn),
        spec,
        dyn.clamp_nonnegative,
        dyn.n,
        out,
        failures,
        0,
    )
    if failures:
        raise BlowUp(f"trajectory exceeded {BLOWUP_GUARD:g}", t=failures[0])
    return Path(times=spec.times(), states=out[0])


def integrate_effective(
    eff: EffectiveModel,
    x0_eff: float,
    spec: IntegrationSpec,
    realization_index: int = 0,
) -> Path:
    """One effective-equation path from an explicit initial value."""
    gen = realization_stream(spec.seed, realization_index)
    out = np.empty((1, spec.n_records, 1))
    failures = {}
    _integrate_block(
        [gen],
        np.array([float(x0_eff)]),
        _drift_eff(eff),
        _diff_eff(eff),
        spec,
        eff.clamp_nonnegative,
        1,
        out,
        failures,
        0,
    )
    if failures:
        raise BlowUp(f"trajectory exceeded {BLOWUP_GUARD:g}", t=failures[0])
    return Path(times=spec.times(), states=out[0])


def _run(
    spec: IntegrationSpec,
    dim: int,
    noise_dim: int,
    drift_fn,
    diff_fn,
    clamp: bool,
    initializer: Optional[Callable],
    shared_x0,
    threads: int,
    stream_kind: int = 0,
    x0_override: Optional[Callable] = None,
) -> Ensemble:
    R = spec.realizations
    scalar = dim == 1
    out = np.empty((R, spec.n_records, dim))
    failures = {}

    if shared_x0 is not None:
        x0_shared = shared_x0
    else:
        x0_shared = None

    def worker(r_lo, r_hi):
        gens = []
        x0s = []
        for r in range(r_lo, r_hi):
            g = substream(spec.seed, stream_kind, r)
            if x0_override is not None:
                x0s.append(x0_override(r))
            elif x0_shared is not None:
                x0s.append(x0_shared)
            else:
                x0s.append(initializer(g, dim))
            gens.append(g)
        x0_block = np.asarray(x0s, dtype=float)
        local_fail = {}
        _integrate_block(
            gens, x0_block, drift_fn, diff_fn, spec, clamp, noise_dim,
            out[r_lo:r_hi], local_fail, r_lo,
        )
        return local_fail

    # Block layout must be a pure function of R for multidimensional systems:
    # the batched matrix product sums in a shape-dependent order, so the
    # block heights (not just the noise streams) must match across thread
    # counts for byte-identical output. Scalar runs use only elementwise
    # arithmetic, which is partition-independent, so they split by thread.
    if dim > 1:
        edges = list(range(0, R, FULL_BLOCK)) + [R]
    elif threads <= 1:
        edges = [0, R]
    else:
        edges = np.linspace(0, R, min(threads, R) + 1).astype(int).tolist()
    blocks = [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]

    if threads <= 1:
        for lo, hi in blocks:
            failures.update(worker(lo, hi))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for res in pool.map(lambda b: worker(*b), blocks):
                failures.update(res)
    return Ensemble(spec=spec, times=spec.times(), states=out, failures=failures)


def run_full_ensemble(
    dyn: NodeDynamics,
    net: NetworkMatrix,
    spec: IntegrationSpec,
    initializer: Optional[Callable] = None,
    shared_x0: bool = False,
    threads: int = 1,
) -> Ensemble:
    """R full-system paths. The initializer draws x0 from each realization's
    substream; with shared_x0 one x0 is drawn from the shared stream instead."""
    if net.n != dyn.n:
        raise DimensionMismatch("network and dynamics sizes must agree")
    if initializer is None:
        initializer = uniform_initializer()
    shared = None
    if shared_x0:
        shared = np.asarray(initializer(substream(spec.seed, 2), dyn.n), dtype=float)
    return _run(
        spec,
        dyn.n,
        dyn.n,
        _drift_full(dyn, net),
        _diff_full(dyn),
        dyn.clamp_nonnegative,
        initializer,
        shared,
        threads,
    )


def run_effective_ensemble(
    eff: EffectiveModel,
    spec: IntegrationSpec,
    initializer: Optional[Callable] = None,
    shared_x0: bool = False,
    threads: int = 1,
) -> Ensemble:
    """R effective-equation paths (dimension 1)."""
    if initializer is None:
        initializer = uniform_initializer()
    shared = None
    if shared_x0:
        shared = float(initializer(substream(spec.seed, 2), 1))
    return _run(
        spec,
        1,
        1,
        _drift_eff(eff),
        _diff_eff(eff),
        eff.clamp_nonnegative,
        initializer,
        shared,
        threads,
    )


def run_matched_effective_ensemble(
    eff: EffectiveModel,
    spec: IntegrationSpec,
    weights,
    lo: float = 0.0,
    hi: float = 1.0,
    threads: int = 1,
) -> Ensemble:
    """Effective ensemble whose realization r starts at the projection of the
    exact x0 vector full-system realization r draws, for comparing the two
    systems path-for-path. Noise comes from the dedicated matched stream."""
    w = np.asarray(weights, dtype=float)

    def x0_of(r):
        g = substream(spec.seed, 0, r)
        return float(w @ g.uniform(lo, hi, len(w)))

    return _run(
        spec,
        1,
        1,
        _drift_eff(eff),
        _diff_eff(eff),
        eff.clamp_nonnegative,
        None,
        None,
        threads,
        stream_kind=3,
        x0_override=x0_of,
    )


def run_ensemble(target, spec: IntegrationSpec, **kwargs) -> Ensemble:
    """Dispatch on target: a (NodeDynamics, NetworkMatrix) pair runs the full
    system, an EffectiveModel runs the effective equation."""
    if isinstance(target, EffectiveModel):
        return run_effective_ensemble(target, spec, **kwargs)
    dyn, net = target
    return run_full_ensemble(dyn, net, spec, **kwargs)
