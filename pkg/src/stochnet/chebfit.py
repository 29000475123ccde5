"""Chebyshev interpolation converted to monomial-basis coefficients.

Fits are interpolants at Chebyshev points of the first kind mapped to the
requested interval, then rebased to powers of x so the reduction can apply
the mean-field operator term by term. Degrees are capped because the
monomial conversion is ill-conditioned at high degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.polynomial.chebyshev as npcheb
import numpy.polynomial.polynomial as nppoly

from .errors import DegreeTooHigh, InvalidParameter, NonFiniteSample

MAX_DEGREE_1D = 12
MAX_DEGREE_2D = 8


@dataclass(frozen=True)
class ChebFit1D:
    a: float
    b: float
    degree: int
    mono_coeffs: np.ndarray
    max_abs_error: float

    def __call__(self, x):
        return nppoly.polyval(x, self.mono_coeffs)


@dataclass(frozen=True)
class ChebFit2D:
    a: float
    b: float
    P: int
    Q: int
    d_pq: np.ndarray
    max_abs_error: float

    def __call__(self, x, y):
        return nppoly.polyval2d(x, y, self.d_pq)


def cheb_nodes(a: float, b: float, count: int) -> np.ndarray:
    """First-kind Chebyshev points mapped affinely to [a, b]."""
    k = np.arange(count)
    u = np.cos((2 * k + 1) * np.pi / (2 * count))
    return 0.5 * (a + b) + 0.5 * (b - a) * u


def _eval(f, xs):
    vals = np.asarray([f(float(x)) for x in np.atleast_1d(xs)], dtype=float)
    if not np.isfinite(vals).all():
        raise NonFiniteSample("function is non-finite at a sample node")
    return vals


def _rebase(cheb_coeffs, a, b):
    # compose the [-1,1] polynomial with u(x) = (2x - a - b)/(b - a)
    mono_u = nppoly.Polynomial(npcheb.cheb2poly(cheb_coeffs))
    u_of_x = nppoly.Polynomial([-(a + b) / (b - a), 2.0 / (b - a)])
    return mono_u(u_of_x).coef


def cheb_fit_1d(f, a: float, b: float, degree: int) -> ChebFit1D:
    """Interpolate f at degree+1 Chebyshev nodes; report monomial coefficients
    and the max error on a 1000-point uniform validation grid."""
    if not a < b:
        raise InvalidParameter(f"need a < b, got [{a}, {b}]")
    if degree < 0:
        raise InvalidParameter("degree must be >= 0")
    if degree > MAX_DEGREE_1D:
        raise DegreeTooHigh(f"degree {degree} exceeds cap {MAX_DEGREE_1D}")
    xs = cheb_nodes(a, b, degree + 1)
    u = (2.0 * xs - a - b) / (b - a)
    vals = _eval(f, xs)
    cheb_coeffs = npcheb.chebfit(u, vals, degree)
    mono = _rebase(cheb_coeffs, a, b)
    mono = np.pad(mono, (0, degree + 1 - len(mono)))
    grid = np.linspace(a, b, 1000)
    err = float(np.max(np.abs(_eval(f, grid) - nppoly.polyval(grid, mono))))
    return ChebFit1D(a=a, b=b, degree=degree, mono_coeffs=mono, max_abs_error=err)


def cheb_fit_2d(g, a: float, b: float, P: int, Q: int) -> ChebFit2D:
    """Tensor-product interpolation of g(x, y) on P x Q Chebyshev nodes.

    d_pq[p, q] multiplies x^p y^q. P and Q count coefficients per axis
    (degree + 1), matching the coupling expansion's term counts.
    """
    if not a < b:
        raise InvalidParameter(f"need a < b, got [{a}, {b}]")
    if not (1 <= P <= MAX_DEGREE_2D and 1 <= Q <= MAX_DEGREE_2D):
        raise DegreeTooHigh(f"P, Q must lie in [1, {MAX_DEGREE_2D}]")
    xs = cheb_nodes(a, b, P)
    ys = cheb_nodes(a, b, Q)
    vals = np.empty((P, Q))
    for i, x in enumerate(xs):
        for j, yv in enumerate(ys):
            vals[i, j] = g(float(x), float(yv))
    if not np.isfinite(vals).all():
        raise NonFiniteSample("function is non-finite at a sample node")
    # fit rows in y, then fit the resulting coefficient columns in x
    row_coeffs = np.empty((P, Q))
    for i in range(P):
        fit = _fit_values(ys, vals[i], a, b, Q - 1)
        row_coeffs[i] = np.pad(fit, (0, Q - len(fit)))
    d_pq = np.empty((P, Q))
    for q in range(Q):
        fit = _fit_values(xs, row_coeffs[:, q], a, b, P - 1)
        d_pq[:, q] = np.pad(fit, (0, P - len(fit)))
    gx, gy = np.meshgrid(np.linspace(a, b, 100), np.linspace(a, b, 100))
    want = np.empty_like(gx)
    for i in range(gx.shape[0]):
        for j in range(gx.shape[1]):
            want[i, j] = g(float(gx[i, j]), float(gy[i, j]))
    err = float(np.max(np.abs(want - nppoly.polyval2d(gx, gy, d_pq))))
    return ChebFit2D(a=a, b=b, P=P, Q=Q, d_pq=d_pq, max_abs_error=err)


def _fit_values(xs, vals, a, b, degree):
    u = (2.0 * np.asarray(xs) - a - b) / (b - a)
    return _rebase(npcheb.chebfit(u, vals, degree), a, b)


def collapse_coupling(d_pq) -> np.ndarray:
    """Collapse d_pq to the diagonal coefficients c_l with l = p + q.

    c_l is the coefficient of z^l in g(z, z): every entry d_pq with
    p + q = l contributes, because x^p y^q restricted to y = x is x^(p+q).
    """
    d = np.asarray(d_pq, dtype=float)
    if d.ndim != 2:
        raise InvalidParameter("d_pq must be 2-d")
    if not np.isfinite(d).all():
        raise InvalidParameter("d_pq contains non-finite entries")
    P, Q = d.shape
    c = np.zeros(P + Q - 1)
    for p in range(P):
        for q in range(Q):
            c[p + q] += d[p, q]
    return c
