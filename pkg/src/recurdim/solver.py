"""Fixed-point solving of the interpolation equation, oscillation sums and
the infinite-variation certificate.

The function f is the unique continuous fixed point of
f(L_n(x)) = S_n(x) f(x) + q_n(x).  It is approximated on a uniform grid by
sweeping the recursion over piecewise-linear interpolants; the contraction
factor is beta = max_n sup |S_n|, so the iteration error is controlled by
the last sweep's sup change.  Oscillation sums over equal splits of an
interval drive both the variation certificate and the box-count ladder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import RfifSpec
from .intervals import Interval
from .partition import Partition
from .polynomials import abs_range, poly_variation
from .scaling import build_matrix, spectral_radius

DEFAULT_TOL = 1e-10
MAX_SAMPLES = 10**6
SUP_SWEEPS = 50
SUP_EXTRA_TOL = 1e-13
RECURSION_SLACK = 1e-6


class ResolutionError(ValueError):
    """An oscillation piece holds fewer than two samples."""


@dataclass(frozen=True)
class SampledRfif:
    """Grid samples of the solved function on [x_0, x_N]."""

    x0: Fraction
    h: Fraction  # grid step (x_N - x_0) / (N * Q)
    Q: int
    values: np.ndarray
    sup_error: float

    @property
    def n_samples(self) -> int:
        return len(self.values)

    def grid_index(self, x: Fraction) -> int:
        """Exact index of a grid-aligned point; raises if off-grid."""
        pos = (x - self.x0) / self.h
        if pos.denominator != 1:
            raise ValueError(f"{x} is not on the sample grid")
        i = int(pos)
        if not 0 <= i < self.n_samples:
            raise ValueError(f"{x} outside the sampled domain")
        return i

    def __call__(self, x: float) -> float:
        pos = (x - float(self.x0)) / float(self.h)
        base = min(max(int(math.floor(pos)), 0), self.n_samples - 2)
        w = pos - base
        return float((1.0 - w) * self.values[base] + w * self.values[base + 1])


def contraction_factor(spec: RfifSpec) -> float:
    return max(abs_range(m.S, spec.domain(m.n))[1] for m in spec.maps)


def default_resolution(spec: RfifSpec, max_ratio: int) -> int:
    Q = spec.N * max_ratio**8
    while spec.N * Q > MAX_SAMPLES:
        Q //= max_ratio
    return max(Q, 1)


def solve_rfif(
    spec: RfifSpec,
    Q: int,
    tol: float = DEFAULT_TOL,
    max_iters: int = 500,
) -> SampledRfif:
    """Sweep the recursion to its fixed point on an N*Q+1 point grid.

    Each sweep evaluates the right-hand side at the exact rational pullback
    of every grid point, reading the current approximation by linear
    interpolation between samples.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    beta = contraction_factor(spec)
    if beta >= 1.0:
        raise ValueError(f"contraction factor {beta} >= 1")

    N = spec.N
    x0 = spec.x(0)
    h = (spec.x(N) - x0) / (N * Q)
    n_pts = N * Q + 1

    base = np.empty(n_pts, dtype=np.int64)
    weight = np.empty(n_pts, dtype=float)
    s_vals = np.empty(n_pts, dtype=float)
    q_vals = np.empty(n_pts, dtype=float)
    for g in range(n_pts):
        n = min(g // Q + 1, N)
        m = spec.map(n)
        t = m.L.inverse(x0 + g * h)  # exact rational pullback
        pos = (t - x0) / h
        b = pos.numerator // pos.denominator
        if b >= n_pts - 1:
            b = n_pts - 2
        base[g] = b
        weight[g] = float(pos - b)
        tf = float(t)
        s_vals[g] = m.S(tf)
        q_vals[g] = m.q(tf)

    node_x = [float(x) for x, _ in spec.nodes]
    node_y = [y for _, y in spec.nodes]
    grid_x = np.array([float(x0) + g * float(h) for g in range(n_pts)])
    v = np.interp(grid_x, node_x, node_y)

    delta = math.inf
    for _ in range(max_iters):
        pulled = (1.0 - weight) * v[base] + weight * v[base + 1]
        new = s_vals * pulled + q_vals
        delta = float(np.max(np.abs(new - v)))
        v = new
        if beta == 0.0:
            if delta == 0.0:
                break
        elif delta <= tol * (1.0 - beta) / beta:
            break
    else:
        if beta > 0.0 and delta > tol * (1.0 - beta) / beta:
            raise RuntimeError(f"no convergence in {max_iters} sweeps (delta={delta})")
    sup_error = delta * beta / (1.0 - beta) if beta > 0.0 else 0.0
    return SampledRfif(x0=x0, h=h, Q=Q, values=v, sup_error=sup_error)


def sup_bound(spec: RfifSpec, members: tuple[int, ...] | None = None) -> float:
    """Upper bound for sup|f| from the per-map self-consistent system.

    alpha_n <= sup|S_n| * max { alpha_j : I_j inside D_n } + sup|q_n|.
    The iteration starts at the global bound max sup|q| / (1 - beta) and
    decreases monotonically, so every sweep yields a valid bound.
    """
    scope = tuple(members) if members is not None else tuple(range(1, spec.N + 1))
    sup_s = {}
    sup_q = {}
    feeds = {}
    for n in scope:
        m = spec.map(n)
        D = spec.domain(n)
        sup_s[n] = abs_range(m.S, D)[1]
        sup_q[n] = abs_range(m.q, D)[1]
        feeds[n] = [j for j in scope if D.contains(spec.interval(j))]
    beta = max(sup_s.values())
    if beta >= 1.0:
        raise ValueError(f"contraction factor {beta} >= 1")
    if beta == 0.0:
        return max(sup_q.values())
    start = max(sup_q.values()) / (1.0 - beta)
    alpha = {n: start for n in scope}
    for sweep in range(10_000):
        nxt = {
            n: sup_s[n] * max((alpha[j] for j in feeds[n]), default=0.0) + sup_q[n]
            for n in scope
        }
        change = max(abs(nxt[n] - alpha[n]) for n in scope)
        alpha = nxt
        if sweep >= SUP_SWEEPS and change <= SUP_EXTRA_TOL:
            break
    return max(alpha.values())


def oscillation_sum(f: SampledRfif, ratio: int, p: int, J: Interval) -> float:
    """Sum of (max - min) over the T^p equal pieces of J, sampled.

    Piece boundaries are exact rationals; boundary samples are shared by the
    adjacent pieces.  Sampling can only underestimate the true sum.
    """
    n_pieces = ratio**p
    step = (J.hi - J.lo) / n_pieces
    total = []
    vals = f.values
    for s in range(n_pieces):
        lo = (J.lo + s * step - f.x0) / f.h
        hi = lo + step / f.h
        i_lo = math.ceil(lo)
        i_hi = math.floor(hi)
        if i_hi - i_lo + 1 < 2:
            raise ResolutionError(
                f"piece {s} of {J} at depth {p} holds {max(i_hi - i_lo + 1, 0)} samples"
            )
        seg = vals[i_lo : i_hi + 1]
        total.append(float(seg.max() - seg.min()))
    return math.fsum(total)


@dataclass(frozen=True)
class OscillationVector:
    component: int
    level: int
    depth: int
    entries: dict[int, float]

    def norm1(self) -> float:
        return math.fsum(self.entries.values())

    def as_array(self, labels: tuple[int, ...]) -> np.ndarray:
        return np.array([self.entries.get(i, 0.0) for i in labels])


def oscillation_vector(
    f: SampledRfif, partition: Partition, k: int, p: int
) -> tuple[OscillationVector, OscillationVector]:
    """(V, V~) at level k and depth p.

    V_i is the oscillation sum over the surviving cell i.  V~_i sums the
    oscillation over cell i's level-(k+1) children that fail to survive.
    """
    T = partition.ratio
    r = partition.component.index
    theta_next = partition.theta(k + 1)
    V: dict[int, float] = {}
    Vt: dict[int, float] = {}
    for i in sorted(partition.theta(k)):
        V[i] = oscillation_sum(f, T, p, partition.interval(k, i))
        dropped = [
            c for c in range((i - 1) * T + 1, i * T + 1) if c not in theta_next
        ]
        Vt[i] = math.fsum(
            oscillation_sum(f, T, p, partition.interval(k + 1, c)) for c in dropped
        )
    return (
        OscillationVector(component=r, level=k, depth=p, entries=V),
        OscillationVector(component=r, level=k, depth=p, entries=Vt),
    )


def xi_entry(spec: RfifSpec, partition: Partition, k: int, i: int, f_bound: float) -> float:
    n = partition.owner(k, i)
    D = partition.preimage(k, i)
    m = spec.map(n)
    return 2.0 * f_bound * poly_variation(m.S, D) + poly_variation(m.q, D)


def xi_bound(spec: RfifSpec, members: tuple[int, ...], f_bound: float) -> float:
    """Right side of the l1 bound for the xi error vector:
    sum over maps of 2*f_bound*Var(S_n, D_n) + Var(q_n, D_n)."""
    return math.fsum(
        2.0 * f_bound * poly_variation(spec.map(n).S, spec.domain(n))
        + poly_variation(spec.map(n).q, spec.domain(n))
        for n in members
    )


@dataclass(frozen=True)
class CertificateResult:
    status: str  # certified_infinite | refuted_finite | unknown
    column_min: float
    xi_norm: float
    threshold: float
    witness_p: int | None
    v_tilde_zero: bool


def variation_certificate(
    spec: RfifSpec,
    f: SampledRfif,
    partition: Partition,
    k: int,
    p_max: int,
) -> CertificateResult:
    """Decide Var(f) on the piece: infinite, finite, or unknown.

    If the lower matrix has min column sum c > 1 then the depth recursion
    grows the total oscillation geometrically once it ever exceeds
    threshold = ||xi||_1 / (c - 1); observing such an excess (a sampled
    underestimate suffices) certifies infinite variation.  The finite
    verdict uses the upper recursion: with spectral radius < 1, no dropped
    children, and finite-variation coefficients the telescoped sum is
    bounded.
    """
    members = partition.members
    T = partition.ratio
    lower = build_matrix(partition, k, "lower")
    col_sums = np.asarray(lower.data.sum(axis=0)).ravel()
    c = float(col_sums.min()) if lower.order else 0.0
    f_bound = sup_bound(spec, members)
    xi_norm = xi_bound(spec, members, f_bound)

    theta_next = partition.theta(k + 1)
    v_tilde_zero = theta_next == partition.theta_tilde(k)

    if c > 1.0:
        threshold = xi_norm / (c - 1.0)
        for p in range(1, max(p_max - k, 0) + 1):
            try:
                total = math.fsum(
                    oscillation_sum(f, T, p, partition.interval(k, i))
                    for i in sorted(partition.theta(k))
                )
            except ResolutionError:
                break
            if total > threshold:
                return CertificateResult(
                    status="certified_infinite",
                    column_min=c,
                    xi_norm=xi_norm,
                    threshold=threshold,
                    witness_p=p + k,
                    v_tilde_zero=v_tilde_zero,
                )
        return CertificateResult(
            status="unknown",
            column_min=c,
            xi_norm=xi_norm,
            threshold=threshold,
            witness_p=None,
            v_tilde_zero=v_tilde_zero,
        )

    if all(spec.map(n).S.is_zero for n in members):
        return CertificateResult(
            status="refuted_finite",
            column_min=c,
            xi_norm=xi_norm,
            threshold=math.inf,
            witness_p=None,
            v_tilde_zero=v_tilde_zero,
        )
    rho_up = spectral_radius(build_matrix(partition, k, "upper"))
    if rho_up < 1.0 and v_tilde_zero:
        return CertificateResult(
            status="refuted_finite",
            column_min=c,
            xi_norm=xi_norm,
            threshold=math.inf,
            witness_p=None,
            v_tilde_zero=v_tilde_zero,
        )
    return CertificateResult(
        status="unknown",
        column_min=c,
        xi_norm=xi_norm,
        threshold=math.inf,
        witness_p=None,
        v_tilde_zero=v_tilde_zero,
    )


def check_recursion(
    spec: RfifSpec,
    f: SampledRfif,
    partition: Partition,
    k: int,
    p: int,
    slack: float = RECURSION_SLACK,
) -> bool:
    """Entrywise sandwich for the depth recursion of the oscillation vector:

        lower * V(p) + V~(p) - xi  <=  V(p+1)  <=  upper * V(p) + V~(p) + xi

    checked with additive slack for the sampling underestimate.
    """
    labels = tuple(sorted(partition.theta(k)))
    V_p, Vt_p = oscillation_vector(f, partition, k, p)
    V_next, _ = oscillation_vector(f, partition, k, p + 1)
    f_bound = sup_bound(spec, partition.members)
    xi = np.array([xi_entry(spec, partition, k, i, f_bound) for i in labels])
    lower = build_matrix(partition, k, "lower").data
    upper = build_matrix(partition, k, "upper").data
    v = V_p.as_array(labels)
    vt = Vt_p.as_array(labels)
    vn = V_next.as_array(labels)
    lo_side = lower @ v + vt - xi
    hi_side = upper @ v + vt + xi
    return bool(np.all(vn >= lo_side - slack) and np.all(vn <= hi_side + slack))
