"""Node-level dynamics: per-node functions, coefficient form, built-in models.

The full system is dx_i = (F_i(x_i) + sum_j A_ij G_i(x_i, x_j)) dt
+ H_i(x_i) dW_i with independent Wiener processes W_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, NonFiniteState
from .network import NetworkMatrix


@dataclass(frozen=True)
class NodeDynamics:
    """Per-node scalar functions F_i, G_i(x_i, x_j), H_i.

    drift_batch/diffusion_batch are optional vectorized evaluators over a
    (realizations, n) state block; the integrator falls back to the per-node
    functions when they are absent.
    """

    n: int
    F: Sequence[Callable]
    G: Sequence[Callable]
    H: Sequence[Callable]
    clamp_nonnegative: bool = False
    drift_batch: Optional[Callable] = field(default=None, repr=False)
    diffusion_batch: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        if not (len(self.F) == len(self.G) == len(self.H) == self.n):
            raise InvalidParameter("F, G, H must each have length n")


@dataclass(frozen=True)
class CoefficientModel:
    """Monomial-basis coefficients of F, G, H per node.

    B[i, k] multiplies x_i^k in F_i, dpq[i, p, q] multiplies
    x_i^p x_j^q in G_i, and D[i, s] multiplies x_i^s in H_i
    (exponents are index positions, so column 0 is the constant term).
    fit_tol records the worst fitting error when built from functions.
    """

    B: np.ndarray
    dpq: np.ndarray
    D: np.ndarray
    fit_tol: float = 0.0

    def __post_init__(self):
        B = np.atleast_2d(np.asarray(self.B, dtype=float))
        dpq = np.asarray(self.dpq, dtype=float)
        D = np.atleast_2d(np.asarray(self.D, dtype=float))
        if dpq.ndim != 3:
            raise InvalidParameter("dpq must be an n x P x Q tensor")
        if not (B.shape[0] == dpq.shape[0] == D.shape[0]):
            raise DimensionMismatch("B, dpq, D must agree on node count")
        for name, arr in (("B", B), ("dpq", dpq), ("D", D)):
            if not np.isfinite(arr).all():
                raise InvalidParameter(f"{name} contains non-finite entries")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "dpq", dpq)
        object.__setattr__(self, "D", D)

    @property
    def n(self):
        return self.B.shape[0]


def ou_model(n: int, epsilon: float) -> NodeDynamics:
    """Multivariate Ornstein-Uhlenbeck: F = 0, G = -x_j, H = epsilon."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    if epsilon < 0:
        raise InvalidParameter("epsilon must be >= 0")
    eps = float(epsilon)

    def drift_batch(X, A):
        return -(X @ A.T)

    def diffusion_batch(X):
        return np.full_like(X, eps)

    return NodeDynamics(
        n=n,
        F=[lambda x: 0.0] * n,
        G=[lambda xi, xj: -xj] * n,
        H=[lambda x: eps] * n,
        drift_batch=drift_batch,
        diffusion_batch=diffusion_batch,
    )


def glv_model(alpha, epsilon: float) -> NodeDynamics:
    """Generalized Lotka-Volterra: F = alpha_i x, G = x_i x_j, H = epsilon x.

    States are meant to be clamped to [0, inf) by the integrator; the flag
    on the returned dynamics requests that.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1:
        raise InvalidParameter("alpha must be a vector")
    if epsilon < 0:
        raise InvalidParameter("epsilon must be >= 0")
    n = alpha.shape[0]
    eps = float(epsilon)

    def drift_batch(X, A):
        return X * (alpha + X @ A.T)

    def diffusion_batch(X):
        return eps * X

    def make_f(a):
        return lambda x: a * x

    return NodeDynamics(
        n=n,
        F=[make_f(a) for a in alpha],
        G=[lambda xi, xj: xi * xj] * n,
        H=[lambda x: eps * x] * n,
        clamp_nonnegative=True,
        drift_batch=drift_batch,
        diffusion_batch=diffusion_batch,
    )


def ou_coefficients(n: int, epsilon: float) -> CoefficientModel:
    """Closed-form coefficient layout of the OU model."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    dpq = np.zeros((n, 1, 2))
    dpq[:, 0, 1] = -1.0
    return CoefficientModel(
        B=np.zeros((n, 1)), dpq=dpq, D=np.full((n, 1), float(epsilon))
    )


def glv_coefficients(alpha, epsilon: float) -> CoefficientModel:
    """Closed-form coefficient layout of the GLV model."""
    alpha = np.asarray(alpha, dtype=float)
    n = alpha.shape[0]
    B = np.zeros((n, 2))
    B[:, 1] = alpha
    dpq = np.zeros((n, 2, 2))
    dpq[:, 1, 1] = 1.0
    D = np.zeros((n, 2))
    D[:, 1] = float(epsilon)
    return CoefficientModel(B=B, dpq=dpq, D=D)


def gen_alpha(n: int, mu_alpha: float, seed) -> np.ndarray:
    """Growth rates alpha_i ~ normal(mu_alpha, |mu_alpha/3|)."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.normal(mu_alpha, abs(mu_alpha / 3.0), n)


def full_drift(dyn: NodeDynamics, net: NetworkMatrix, x) -> np.ndarray:
    """Exact N-dimensional drift F_i(x_i) + sum_j A_ij G_i(x_i, x_j)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (dyn.n,) or net.n != dyn.n:
        raise DimensionMismatch("state, dynamics, and network sizes must agree")
    A = net.weights
    out = np.empty(dyn.n)
    for i in range(dyn.n):
        gi = dyn.G[i]
        coupling = sum(A[i, j] * gi(x[i], x[j]) for j in range(dyn.n))
        out[i] = dyn.F[i](x[i]) + coupling
    if not np.isfinite(out).all():
        raise NonFiniteState("drift produced a non-finite component")
    return out


def full_diffusion(dyn: NodeDynamics, x) -> np.ndarray:
    """Diffusion amplitude vector (H_1(x_1), ..., H_n(x_n))."""
    x = np.asarray(x, dtype=float)
    if x.shape != (dyn.n,):
        raise DimensionMismatch("state and dynamics sizes must agree")
    out = np.array([dyn.H[i](x[i]) for i in range(dyn.n)], dtype=float)
    if not np.isfinite(out).all():
        raise NonFiniteState("diffusion produced a non-finite component")
    return out


def coefficient_dynamics(coef: CoefficientModel) -> NodeDynamics:
    """NodeDynamics whose functions evaluate the coefficient polynomials.

    Includes vectorized batch evaluators, so a fitted model integrates as
    fast as the built-in ones.
    """
    n, m = coef.B.shape
    _, P, Q = coef.dpq.shape
    t = coef.D.shape[1]
    B, dpq, D = coef.B, coef.dpq, coef.D

    def drift_batch(X, A):
        # F part: sum_k B[i,k] x_i^k
        powsF = np.stack([X**k for k in range(m)], axis=-1)  # (R, n, m)
        drift = np.einsum("rik,ik->ri", powsF, B)
        # coupling: sum_j A_ij sum_pq d[i,p,q] x_i^p x_j^q
        powsP = np.stack([X**p for p in range(P)], axis=-1)  # (R, n, P)
        powsQ = np.stack([X**q for q in range(Q)], axis=-1)  # (R, n, Q)
        # for each q: y_q[r, i] = sum_j A_ij x_j^q
        yq = np.einsum("ij,rjq->riq", A, powsQ)
        drift += np.einsum("rip,ipq,riq->ri", powsP, dpq, yq)
        return drift

    def diffusion_batch(X):
        powsH = np.stack([X**s for s in range(t)], axis=-1)
        return np.einsum("ris,is->ri", powsH, D)

    def make_F(i):
        return lambda x: float(np.polynomial.polynomial.polyval(x, B[i]))

    def make_G(i):
        def g(xi, xj):
            pi = xi ** np.arange(P)
            qj = xj ** np.arange(Q)
            return float(pi @ dpq[i] @ qj)

        return g

    def make_H(i):
        return lambda x: float(np.polynomial.polynomial.polyval(x, D[i]))

    return NodeDynamics(
        n=n,
        F=[make_F(i) for i in range(n)],
        G=[make_G(i) for i in range(n)],
        H=[make_H(i) for i in range(n)],
        drift_batch=drift_batch,
        diffusion_batch=diffusion_batch,
    )
