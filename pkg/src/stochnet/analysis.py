"""Ensemble statistics: the cross-realization standard-deviation indicator,
the convergence report, the stochasticity score, and the reduction error.

The standard deviation of the realizations of the effective equation is the
primary diagnostic: a small value means the stochastic term is unimportant,
and a decline after an initial jump means the system converges. Realizations
that blew up are excluded from every statistic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateScale,
    DimensionMismatch,
    InvalidParameter,
    TooFewRealizations,
)
from .sde import Ensemble

DEFAULT_SMOOTH_WINDOW = 5
# Tolerance for "non-increasing after the peak", as a fraction of the peak.
# Sized to absorb the sampling noise of a 50-realization std estimate.
DEFAULT_TOL_FRACTION = 0.05


@dataclass(frozen=True)
class StdTrajectory:
    times: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.std):
            raise DimensionMismatch("times and std must have equal length")


@dataclass(frozen=True)
class ConvergenceReport:
    t_peak: float
    peak_std: float
    final_std: float
    decreasing_after_peak: bool
    final_to_peak_ratio: float

    def to_json_dict(self):
        return {
            "t_peak": self.t_peak,
            "peak_std": self.peak_std,
            "final_std": self.final_std,
            "decreasing_after_peak": self.decreasing_after_peak,
            "final_to_peak_ratio": self.final_to_peak_ratio,
        }

    @classmethod
    def from_json_dict(cls, doc):
        return cls(
            t_peak=float(doc["t_peak"]),
            peak_std=float(doc["peak_std"]),
            final_std=float(doc["final_std"]),
            decreasing_after_peak=bool(doc["decreasing_after_peak"]),
            final_to_peak_ratio=float(doc["final_to_peak_ratio"]),
        )


def _component_matrix(ens: Ensemble, component) -> np.ndarray:
    """Extract the (R, time) value matrix for one component, dropping
    realizations that failed."""
    if component == "effective":
        if ens.dim != 1:
            raise InvalidParameter(
                "component 'effective' needs a scalar ensemble; "
                "project the full ensemble first"
            )
        mat = ens.states[:, :, 0]
    else:
        idx = int(component)
        if not 0 <= idx < ens.dim:
            raise InvalidParameter(f"component {idx} out of range for dim {ens.dim}")
        mat = ens.states[:, :, idx]
    if ens.failures:
        keep = [r for r in range(ens.n_realizations) if r not in ens.failures]
        mat = mat[keep]
    return mat


def ensemble_mean(ens: Ensemble, component="effective") -> np.ndarray:
    mat = _component_matrix(ens, component)
    if mat.shape[0] < 1:
        raise TooFewRealizations("no surviving realizations")
    return mat.mean(axis=0)


def ensemble_std(ens: Ensemble, component="effective") -> StdTrajectory:
    """Cross-realization standard deviation at each recorded time."""
    mat = _component_matrix(ens, component)
    if mat.shape[0] < 2:
        raise TooFewRealizations(
            f"need >= 2 surviving realizations, have {mat.shape[0]}"
        )
    return StdTrajectory(times=ens.times.copy(), std=mat.std(axis=0, ddof=1))


def project_ensemble(ens: Ensemble, weights) -> Ensemble:
    """Scalar ensemble of the mean-field projection of every full path."""
    w = np.asarray(weights, dtype=float)
    if ens.dim != len(w):
        raise DimensionMismatch("weights length must match ensemble dimension")
    proj = ens.states @ w
    return Ensemble(
        spec=ens.spec,
        times=ens.times,
        states=proj[:, :, None],
        failures=dict(ens.failures),
    )


def _smooth(values: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average; the window shrinks near the edges."""
    if window <= 1:
        return values.astype(float)
    half = window // 2
    n = len(values)
    out = np.empty(n)
    for i in range(n):
        lo = max(0, i - half)
        hi = min(n, i + half + 1)
        out[i] = values[lo:hi].mean()
    return out


def convergence_report(
    traj: StdTrajectory,
    smooth_window: int = DEFAULT_SMOOTH_WINDOW,
    tol: float = None,
) -> ConvergenceReport:
    """Peak, final value, and post-peak monotonicity of the smoothed std.

    The peak is the earliest argmax of the smoothed series. The trajectory
    counts as decreasing after the peak when no smoothed value rises above
    its predecessor by more than tol (default DEFAULT_TOL_FRACTION of the
    peak); a peak on the last point means the std was still rising. An
    identically zero std reports ratio 1 and decreasing true, so a noiseless
    converged run passes.
    """
    if smooth_window < 1:
        raise InvalidParameter("smooth_window must be >= 1")
    sm = _smooth(np.asarray(traj.std, dtype=float), smooth_window)
    n = len(sm)
    pk = int(np.argmax(sm))
    peak = float(sm[pk])
    final = float(sm[-1])
    if peak == 0.0:
        return ConvergenceReport(
            t_peak=float(traj.times[pk]),
            peak_std=0.0,
            final_std=final,
            decreasing_after_peak=True,
            final_to_peak_ratio=1.0,
        )
    if tol is None:
        tol = DEFAULT_TOL_FRACTION * peak
    if pk == n - 1:
        decreasing = False
    else:
        diffs = sm[pk:-1] - sm[pk + 1 :]
        decreasing = bool((diffs >= -tol).all())
    return ConvergenceReport(
        t_peak=float(traj.times[pk]),
        peak_std=peak,
        final_std=final,
        decreasing_after_peak=decreasing,
        final_to_peak_ratio=final / peak,
    )


def stochasticity_score(traj: StdTrajectory, eff_paths: Ensemble) -> float:
    """Noise-to-signal ratio: max std over time divided by the max absolute
    ensemble mean of the effective paths. Small values mean the stochastic
    term barely matters."""
    denom = float(np.max(np.abs(ensemble_mean(eff_paths, "effective"))))
    if denom == 0.0:
        raise DegenerateScale("ensemble mean is identically zero")
    return float(np.max(traj.std)) / denom


def reduction_error(full_ens: Ensemble, eff_ens: Ensemble, s_out) -> float:
    """Relative RMS gap between the mean projected full trajectory and the
    mean effective trajectory."""
    if full_ens.states.shape[1] != eff_ens.states.shape[1]:
        raise DimensionMismatch("ensembles must share the time grid")
    if not np.allclose(full_ens.times, eff_ens.times):
        raise DimensionMismatch("ensembles must share the time grid")
    from .network import mean_field_weights

    w = mean_field_weights(s_out)
    proj = project_ensemble(full_ens, w)
    m_full = ensemble_mean(proj, "effective")
    m_eff = ensemble_mean(eff_ens, "effective")
    scale = float(np.sqrt(np.mean(m_full**2)))
    if scale == 0.0:
        raise DegenerateScale("projected full trajectory is identically zero")
    return float(np.sqrt(np.mean((m_eff - m_full) ** 2)) / scale)
