"""Construction of the one-dimensional effective SDE from a network plus
a coefficient model or fitted node functions.

The effective equation is
dx_eff = (sum_k B_eff^k x_eff^(k-1) + A_eff sum_l C_eff^l x_eff^(l-1)) dt
       + sum_s D_eff^s x_eff^(s-1) dW_eff
with every effective coefficient the mean-field average of its per-node
column and A_eff the mean-field average of the in-strengths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as nppoly

from .chebfit import cheb_fit_1d, cheb_fit_2d, collapse_coupling
from .dynamics import CoefficientModel, NodeDynamics
from .errors import DimensionMismatch
from .network import NetworkMatrix, mean_field, mean_field_weights, strengths


@dataclass(frozen=True)
class EffectiveModel:
    """Scalar coefficients of the effective equation.

    b_eff[k] multiplies x_eff^k in the self term, c_eff[l] multiplies
    x_eff^l inside the A_eff coupling term, d_eff[s] multiplies x_eff^s in
    the diffusion. fit_error records the worst node-function fitting error
    (0 for closed-form coefficient models). clamp_nonnegative mirrors the
    source dynamics' state-domain convention.
    """

    a_eff: float
    b_eff: np.ndarray
    c_eff: np.ndarray
    d_eff: np.ndarray
    fit_error: float = 0.0
    clamp_nonnegative: bool = False

    def __post_init__(self):
        for name in ("b_eff", "c_eff", "d_eff"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            object.__setattr__(self, name, arr)

    def to_json_dict(self):
        return {
            "a_eff": self.a_eff,
            "b_eff": [float(v) for v in self.b_eff],
            "c_eff": [float(v) for v in self.c_eff],
            "d_eff": [float(v) for v in self.d_eff],
        }

    @classmethod
    def from_json_dict(cls, doc):
        return cls(
            a_eff=float(doc["a_eff"]),
            b_eff=np.asarray(doc["b_eff"], dtype=float),
            c_eff=np.asarray(doc["c_eff"], dtype=float),
            d_eff=np.asarray(doc["d_eff"], dtype=float),
        )


def effective_params(coef: CoefficientModel, net: NetworkMatrix) -> EffectiveModel:
    """Mean-field reduction of a coefficient model over a network."""
    if coef.n != net.n:
        raise DimensionMismatch(
            f"coefficient model has {coef.n} nodes, network has {net.n}"
        )
    sv = strengths(net)
    w = mean_field_weights(sv.s_out)
    a_eff = mean_field(sv.s_in, sv.s_out)
    b_eff = w @ coef.B
    # per-node diagonal collapse of the coupling tensor, then mean-field
    n, P, Q = coef.dpq.shape
    c_cols = np.empty((n, P + Q - 1))
    for i in range(n):
        c_cols[i] = collapse_coupling(coef.dpq[i])
    c_eff = w @ c_cols
    d_eff = w @ coef.D
    return EffectiveModel(
        a_eff=a_eff, b_eff=b_eff, c_eff=c_eff, d_eff=d_eff, fit_error=coef.fit_tol
    )


def effective_drift(eff: EffectiveModel, x_eff: float):
    """Drift polynomial of the effective equation."""
    return nppoly.polyval(x_eff, eff.b_eff) + eff.a_eff * nppoly.polyval(
        x_eff, eff.c_eff
    )


def effective_diffusion(eff: EffectiveModel, x_eff: float):
    """Diffusion polynomial of the effective equation."""
    return nppoly.polyval(x_eff, eff.d_eff)


@dataclass(frozen=True)
class FitSpec:
    """Domain and term counts for fitting node functions.

    deg_f and deg_h are polynomial degrees; P and Q are coefficient counts
    per axis of the coupling expansion (degree + 1 each).
    """

    a: float = 0.0
    b: float = 1.0
    deg_f: int = 2
    P: int = 2
    Q: int = 2
    deg_h: int = 1


def reduce_from_functions(
    dyn: NodeDynamics, net: NetworkMatrix, fitspec: FitSpec = FitSpec()
) -> EffectiveModel:
    """Fit every F_i, G_i, H_i on the fit domain, assemble the coefficient
    model, and reduce it. Records the worst per-node fit error."""
    if dyn.n != net.n:
        raise DimensionMismatch(f"dynamics has {dyn.n} nodes, network has {net.n}")
    n = dyn.n
    B = np.empty((n, fitspec.deg_f + 1))
    dpq = np.empty((n, fitspec.P, fitspec.Q))
    D = np.empty((n, fitspec.deg_h + 1))
    worst = 0.0
    for i in range(n):
        fit_f = cheb_fit_1d(dyn.F[i], fitspec.a, fitspec.b, fitspec.deg_f)
        fit_g = cheb_fit_2d(dyn.G[i], fitspec.a, fitspec.b, fitspec.P, fitspec.Q)
        fit_h = cheb_fit_1d(dyn.H[i], fitspec.a, fitspec.b, fitspec.deg_h)
        B[i] = fit_f.mono_coeffs
        dpq[i] = fit_g.d_pq
        D[i] = fit_h.mono_coeffs
        worst = max(worst, fit_f.max_abs_error, fit_g.max_abs_error, fit_h.max_abs_error)
    coef = CoefficientModel(B=B, dpq=dpq, D=D, fit_tol=worst)
    eff = effective_params(coef, net)
    return EffectiveModel(
        a_eff=eff.a_eff,
        b_eff=eff.b_eff,
        c_eff=eff.c_eff,
        d_eff=eff.d_eff,
        fit_error=worst,
        clamp_nonnegative=dyn.clamp_nonnegative,
    )


def with_clamp(eff: EffectiveModel, clamp: bool) -> EffectiveModel:
    return EffectiveModel(
        a_eff=eff.a_eff,
        b_eff=eff.b_eff,
        c_eff=eff.c_eff,
        d_eff=eff.d_eff,
        fit_error=eff.fit_error,
        clamp_nonnegative=clamp,
    )
