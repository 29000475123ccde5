"""Network representation, strengths, the mean-field operator, and generators.

The interaction matrix follows the convention that entry (i, j) is the
influence of node j on node i, so in-strengths are row sums and
out-strengths are column sums.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidParameter,
    IsolatedSpecies,
    ParseError,
    ZeroTotalStrength,
)


@dataclass(frozen=True)
class NetworkMatrix:
    """Dense square interaction matrix."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InvalidParameter(f"weights must be square, got shape {w.shape}")
        if w.shape[0] < 1:
            raise InvalidParameter("need at least one node")
        if not np.isfinite(w).all():
            raise InvalidParameter("weights contain non-finite entries")
        object.__setattr__(self, "weights", w)

    @property
    def n(self):
        return self.weights.shape[0]


@dataclass(frozen=True)
class StrengthVectors:
    s_in: np.ndarray
    s_out: np.ndarray


@dataclass(frozen=True)
class BipartiteIncidence:
    """Binary plant-animal incidence. Rows are plants, columns are animals."""

    y: np.ndarray
    row_labels: tuple = field(default=())
    col_labels: tuple = field(default=())

    def __post_init__(self):
        y = np.asarray(self.y, dtype=int)
        if y.ndim != 2:
            raise InvalidParameter("incidence must be a 2-d matrix")
        if not np.isin(y, (0, 1)).all():
            raise InvalidParameter("incidence entries must be 0 or 1")
        object.__setattr__(self, "y", y)
        if not self.row_labels:
            object.__setattr__(
                self, "row_labels", tuple(f"P{i+1:02d}" for i in range(y.shape[0]))
            )
        if not self.col_labels:
            object.__setattr__(
                self, "col_labels", tuple(f"A{j+1:02d}" for j in range(y.shape[1]))
            )
        if len(self.row_labels) != y.shape[0] or len(self.col_labels) != y.shape[1]:
            raise InvalidParameter("label lists must match incidence dimensions")

    @property
    def n_p(self):
        return self.y.shape[0]

    @property
    def n_a(self):
        return self.y.shape[1]


def strengths(net: NetworkMatrix) -> StrengthVectors:
    """Row sums (in-strength) and column sums (out-strength) of the matrix."""
    return StrengthVectors(s_in=net.weights.sum(axis=1), s_out=net.weights.sum(axis=0))


def mean_field(x, s_out) -> float:
    """Out-strength-weighted average L(x) = sum_j s_out_j x_j / sum_j s_out_j.

    The total out-strength may be negative (competition-dominated networks);
    only an exactly zero total leaves the weights undefined.
    """
    x = np.asarray(x, dtype=float)
    s = np.asarray(s_out, dtype=float)
    total = s.sum()
    if total == 0.0:
        raise ZeroTotalStrength("total out-strength is zero")
    return float((s @ x) / total)


def mean_field_weights(s_out) -> np.ndarray:
    """The normalized weight vector w with L(x) = w @ x."""
    s = np.asarray(s_out, dtype=float)
    total = s.sum()
    if total == 0.0:
        raise ZeroTotalStrength("total out-strength is zero")
    return s / total


def gen_ou_network(n: int, mu_a: float, seed) -> NetworkMatrix:
    """Random matrix with iid normal(mu_a, mu_a/3) entries."""
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    if mu_a <= 0:
        raise InvalidParameter(f"mu_a must be positive, got {mu_a}")
    rng = np.random.default_rng(seed)
    return NetworkMatrix(rng.normal(mu_a, mu_a / 3.0, (n, n)))


def gen_mutualistic(
    inc: BipartiteIncidence, mu_gamma: float, beta_max: float, seed
) -> NetworkMatrix:
    """Four-block mutualistic interaction matrix [[O_pp, G_pa], [G_ap, O_aa]].

    Competition blocks: off-diagonal entries uniform on
    [2*(-1/S) - beta_max, beta_max] (mean -1/S for the guild of S species),
    diagonal entries fixed at -1 (unit intraspecific self-regulation).
    Mutualistic blocks: gamma_ij = gamma * y_ij / k_i with
    gamma ~ normal(mu_gamma, |mu_gamma/3|) per entry and k_i the degree of
    the row species; negative draws are kept as drawn.

    Draw order (one stream): O_pp entries, O_aa entries, G_pa gammas,
    G_ap gammas. `seed` may be an int or a numpy Generator, so callers can
    continue drawing (e.g. growth rates) from the same stream.
    """
    if not np.isfinite(mu_gamma):
        raise InvalidParameter("mu_gamma must be finite")
    if beta_max >= 0:
        raise InvalidParameter(f"beta_max must be negative, got {beta_max}")
    n_p, n_a = inc.n_p, inc.n_a
    for S, guild in ((n_p, "plant"), (n_a, "animal")):
        if beta_max < -1.0 / S:
            raise InvalidParameter(
                f"beta_max {beta_max} below the {guild}-guild mean -1/{S}: "
                "empty uniform support"
            )
    k_p = inc.y.sum(axis=1)
    k_a = inc.y.sum(axis=0)
    if (k_p == 0).any():
        bad = inc.row_labels[int(np.argmin(k_p))]
        raise IsolatedSpecies(f"plant {bad} has no partners")
    if (k_a == 0).any():
        bad = inc.col_labels[int(np.argmin(k_a))]
        raise IsolatedSpecies(f"animal {bad} has no partners")

    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    sigma_g = abs(mu_gamma / 3.0)

    def competition(S):
        lo = 2.0 * (-1.0 / S) - beta_max
        block = rng.uniform(lo, beta_max, (S, S))
        np.fill_diagonal(block, -1.0)
        return block

    o_pp = competition(n_p)
    o_aa = competition(n_a)
    g_pa = rng.normal(mu_gamma, sigma_g, (n_p, n_a)) * inc.y / k_p[:, None]
    g_ap = rng.normal(mu_gamma, sigma_g, (n_a, n_p)) * inc.y.T / k_a[:, None]
    return NetworkMatrix(np.block([[o_pp, g_pa], [g_ap, o_aa]]))


def synthetic_incidence(n_p: int, n_a: int, seed) -> BipartiteIncidence:
    """Nested-style incidence with heavy-tailed plant degrees.

    Plant i links to the first max(1, round(n_a/2 * (i+1)^-0.8)) animals;
    animals left unlinked are attached to one of the five most-connected
    plants. This produced the bundled fig2 network (seed 7).
    """
    rng = np.random.default_rng(seed)
    y = np.zeros((n_p, n_a), dtype=int)
    for i in range(n_p):
        deg = max(1, int(round(n_a * 0.5 * (i + 1) ** -0.8)))
        y[i, : min(deg, n_a)] = 1
    for j in range(n_a):
        if y[:, j].sum() == 0:
            y[rng.integers(0, min(5, n_p)), j] = 1
    return BipartiteIncidence(y=y)


def load_incidence(path) -> BipartiteIncidence:
    """Read an incidence CSV: blank corner, animal labels in row 1, plant
    labels in column 1, 0/1 body cells."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty incidence file", line=1)
    header = rows[0]
    if len(header) < 2:
        raise ParseError("header needs the blank corner plus animal labels", line=1)
    col_labels = tuple(lbl.strip() for lbl in header[1:])
    width = len(header)
    body = []
    row_labels = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != width:
            raise ParseError(
                f"expected {width} cells, got {len(row)}", line=lineno
            )
        row_labels.append(row[0].strip())
        vals = []
        for cell in row[1:]:
            cell = cell.strip()
            if cell not in ("0", "1"):
                raise ParseError(f"cell {cell!r} is not 0 or 1", line=lineno)
            vals.append(int(cell))
        body.append(vals)
    if not body:
        raise ParseError("no plant rows", line=2)
    return BipartiteIncidence(
        y=np.array(body, dtype=int),
        row_labels=tuple(row_labels),
        col_labels=tuple(col_labels),
    )


def save_incidence(inc: BipartiteIncidence, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([""] + list(inc.col_labels))
        for label, row in zip(inc.row_labels, inc.y):
            writer.writerow([label] + [str(int(v)) for v in row])


def load_matrix(path) -> NetworkMatrix:
    """Read a dense matrix CSV, optionally led by a `# n=<N>` line."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    declared = None
    start = 0
    if lines and lines[0].startswith("#"):
        head = lines[0].lstrip("#").strip()
        if head.startswith("n="):
            try:
                declared = int(head[2:])
            except ValueError:
                raise ParseError(f"bad size declaration {head!r}", line=1)
        start = 1
    rows = []
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        try:
            rows.append([float(cell) for cell in line.split(",")])
        except ValueError:
            raise ParseError("non-numeric cell", line=lineno)
    if not rows:
        raise ParseError("no matrix rows", line=start + 1)
    n = len(rows)
    for lineno, row in enumerate(rows, start=start + 1):
        if len(row) != n:
            raise ParseError(f"expected {n} columns, got {len(row)}", line=lineno)
    if declared is not None and declared != n:
        raise ParseError(f"declared n={declared} but found {n} rows", line=1)
    return NetworkMatrix(np.array(rows, dtype=float))


def save_matrix(net: NetworkMatrix, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# n={net.n}\n")
        for row in net.weights:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
