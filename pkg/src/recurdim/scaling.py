"""Restricted vertical scaling matrices and their spectral radii.

A level-k matrix has one row/column per surviving level-k cell of a piece.
The (i, j) entry is the max (upper kind) or min (lower kind) of |S_n| over
cell j when cell j tiles the preimage of cell i under the owning map, and 0
otherwise.  Star kinds index level-(k+1) cells and take the extremum over
the whole preimage instead of over the neighbor cell.

Matrices are stored sparsely: at the default depths the order grows like
T^k and a dense array would not fit in memory, while each row has at most T
nonzero entries.  Small matrices can still be inspected densely via
``ScalingMatrix.dense()``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .intervals import Interval
from .partition import Partition
from .polynomials import abs_range

KINDS = ("upper", "lower", "star_upper", "star_lower")

POWER_MAXITER = 100_000
NILPOTENT_NORM = 1e-300
_DEBUG_CHECK_ORDER = 6


@dataclass(frozen=True)
class ScalingMatrix:
    component: int
    level: int
    kind: str
    index_set: tuple[int, ...]  # sorted cell indices labeling rows/columns
    data: sp.csr_matrix = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.index_set)

    def dense(self) -> np.ndarray:
        return self.data.toarray()

    def entry(self, i: int, j: int) -> float:
        """Entry by cell labels (not positions)."""
        pos = {c: p for p, c in enumerate(self.index_set)}
        return float(self.data[pos[i], pos[j]])


def build_matrix(
    partition: Partition,
    k: int,
    kind: str,
    index_set: frozenset[int] | None = None,
) -> ScalingMatrix:
    """Restricted matrix of the given kind at level k.

    Default restriction: the level-k survivor set for plain kinds, the
    level-(k+1) cells under level-k survivors for star kinds.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    star = kind.startswith("star")
    if index_set is None:
        index_set = partition.theta_tilde(k) if star else partition.theta(k)
    labels = tuple(sorted(index_set))
    pos = {c: p for p, c in enumerate(labels)}
    cell_level = k + 1 if star else k
    w = partition.width(cell_level)
    upper = kind.endswith("upper")

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for i in labels:
        n = partition.owner(cell_level, i)
        S = partition.spec.map(n).S
        D = partition.preimage(cell_level, i)
        if star:
            lo_hi = abs_range(S, D)
            row_val = lo_hi[1] if upper else lo_hi[0]
        # the preimage has the length of exactly T consecutive cells
        for s in range(partition.ratio):
            lo = D.lo + s * w
            j = partition.locate(cell_level, Interval(lo, lo + w))
            if j is None or j not in pos:
                continue
            if star:
                v = row_val
            else:
                lo_hi = abs_range(S, partition.interval(cell_level, j))
                v = lo_hi[1] if upper else lo_hi[0]
            rows.append(pos[i])
            cols.append(pos[j])
            vals.append(v)
    data = sp.csr_matrix(
        (vals, (rows, cols)), shape=(len(labels), len(labels)), dtype=float
    )
    return ScalingMatrix(
        component=partition.component.index,
        level=k,
        kind=kind,
        index_set=labels,
        data=data,
    )


def is_irreducible(M: ScalingMatrix) -> bool:
    """True iff the support digraph is strongly connected (a 1x1 matrix is
    irreducible iff its entry is positive)."""
    n = M.order
    if n == 0:
        return False
    if n == 1:
        return M.data[0, 0] > 0
    n_comp, _ = csgraph.connected_components(
        M.data, directed=True, connection="strong"
    )
    return n_comp == 1


def _rayleigh_iterate(A: sp.csr_matrix, shift: float, tol: float, maxiter: int):
    """Power iteration on A + shift*I from the all-ones vector.

    Returns (estimate_for_A, converged).  Collatz-Wielandt ratio bounds give
    the convergence test; they bracket the Perron root for a nonnegative
    matrix with a positive iterate, which the shift guarantees.
    """
    n = A.shape[0]
    x = np.full(n, 1.0 / np.sqrt(n))
    lam_prev = None
    stable = 0
    for _ in range(maxiter):
        y = A @ x + shift * x
        norm = float(np.linalg.norm(y))
        if norm < NILPOTENT_NORM:
            return -shift, True  # numerically nilpotent: radius 0
        lam = float(x @ y / (x @ x))
        if np.all(x > 0.0):
            ratios = y / x
            lo, hi = float(ratios.min()), float(ratios.max())
            if hi - lo <= tol * max(1.0, hi):
                return 0.5 * (lo + hi) - shift, True
        if lam_prev is not None and abs(lam - lam_prev) <= tol * max(1.0, abs(lam)):
            stable += 1
            if stable >= 10:
                return lam - shift, True
        else:
            stable = 0
        lam_prev = lam
        x = y / norm
    return (lam_prev if lam_prev is not None else 0.0) - shift, False


def spectral_radius(M: ScalingMatrix | sp.spmatrix | np.ndarray, tol: float = 1e-10) -> float:
    """Dominant eigenvalue of a nonnegative matrix by power iteration.

    The plain iteration can oscillate on a periodic support pattern, so on
    non-convergence the iteration restarts on M + I, which moves the Perron
    root from r to r + 1 without reordering the spectrum's moduli for
    nonnegative matrices.
    """
    if isinstance(M, ScalingMatrix):
        A = M.data
    elif isinstance(M, np.ndarray):
        A = sp.csr_matrix(M)
    else:
        A = M.tocsr()
    n = A.shape[0]
    if n == 0:
        return 0.0
    if A.nnz == 0:
        return 0.0
    if float(A.min()) < 0:
        raise ValueError("matrix must be nonnegative")

    est, ok = _rayleigh_iterate(A, 0.0, tol, maxiter=POWER_MAXITER // 10)
    if not ok:
        est, ok = _rayleigh_iterate(A, 1.0, tol, maxiter=POWER_MAXITER)
    result = max(est, 0.0)

    if __debug__ and n <= _DEBUG_CHECK_ORDER:
        ref = charpoly_radius(A.toarray())
        assert abs(result - ref) <= 1e-6 * max(1.0, ref), (result, ref)
    return result


def charpoly_radius(A: np.ndarray) -> float:
    """Spectral radius via the characteristic polynomial.

    Coefficients come from the Faddeev-LeVerrier recursion in exact rational
    arithmetic when entries are rational-exact floats; roots from numpy.
    This is an independent check for small matrices, not a production path.
    """
    n = A.shape[0]
    if n == 0:
        return 0.0
    F = [[Fraction(float(A[i, j])) for j in range(n)] for i in range(n)]

    def matmul(X, Y):
        return [
            [sum(X[i][t] * Y[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]

    # Faddeev-LeVerrier: M_1 = A, c_k = -tr(A M_k)/k, M_{k+1} = A M_k + c_k I
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        M[i][i] = Fraction(1)
    for k in range(1, n + 1):
        M = matmul(F, M)
        c = -sum(M[i][i] for i in range(n)) / k
        coeffs.append(c)
        for i in range(n):
            M[i][i] += c
    roots = np.roots([float(c) for c in coeffs])
    return float(max(abs(roots))) if len(roots) else 0.0


@dataclass(frozen=True)
class SpectraSequence:
    component: int
    levels: tuple[int, ...]
    upper_rho: tuple[float, ...]
    lower_rho: tuple[float, ...]
    one_sided: bool

    @property
    def rho_bracket(self) -> tuple[float, float]:
        return (self.lower_rho[-1], self.upper_rho[-1])

    @property
    def rho_estimate(self) -> float:
        lo, hi = self.rho_bracket
        return 0.5 * (lo + hi)

    def serialize(self) -> str:
        lines = ["k,rho_upper,rho_lower"]
        for k, up, lo in zip(self.levels, self.upper_rho, self.lower_rho):
            lines.append(f"{k},{up:.6g},{lo:.6g}")
        lo, hi = self.rho_bracket
        lines.append(
            f"# bracket=[{lo:.6g},{hi:.6g}] estimate={self.rho_estimate:.6g}"
            f" one_sided={str(self.one_sided).lower()}"
        )
        return "\n".join(lines)


def scaling_positive(partition: Partition) -> bool:
    """Whether every |S_n| of the piece is bounded away from zero on its
    preimage interval D_n; under this the lower radii share the upper limit."""
    spec = partition.spec
    for n in partition.members:
        lo, _ = abs_range(spec.map(n).S, spec.domain(n))
        if not lo > 0.0:
            return False
    return True


def spectra_sequence(partition: Partition, kmax: int, tol: float = 1e-10) -> SpectraSequence:
    if kmax > partition.kmax:
        raise ValueError(f"partition only built to depth {partition.kmax}")
    uppers = []
    lowers = []
    for k in range(1, kmax + 1):
        uppers.append(spectral_radius(build_matrix(partition, k, "upper"), tol))
        lowers.append(spectral_radius(build_matrix(partition, k, "lower"), tol))
    return SpectraSequence(
        component=partition.component.index,
        levels=tuple(range(1, kmax + 1)),
        upper_rho=tuple(uppers),
        lower_rho=tuple(lowers),
        one_sided=not scaling_positive(partition),
    )
