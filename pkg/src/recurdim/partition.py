"""Level-k grids of basic intervals for one strongly connected piece.

Level k splits each member interval I_n, n in the piece, into T^(k-1) equal
cells.  Cells are numbered i = (t-1)*T^(k-1) + j where t is the rank of the
member and 1 <= j <= T^(k-1).  A cell survives at level k+1 when its preimage
under the owning horizontal map coincides exactly with a surviving level-k
cell; survivors at level k tile the k-th basic set of the local IFS.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .config import RfifSpec
from .graph import Component
from .intervals import Interval

KMAX_CAP = 14


@dataclass(frozen=True)
class Partition:
    """Survivor structure of one piece up to a fixed depth.

    ``thetas[k-1]`` is the set of surviving cell indices at level k.  Cell
    geometry is computed on demand from the index arithmetic, so only the
    survivor sets are stored.
    """

    spec: RfifSpec
    component: Component
    kmax: int
    thetas: tuple[frozenset[int], ...]

    @property
    def members(self) -> tuple[int, ...]:
        return self.component.members

    @property
    def ratio(self) -> int:
        return self.component.ratio

    def size(self, k: int) -> int:
        """Number of level-k cells, d * T^(k-1)."""
        return len(self.members) * self.ratio ** (k - 1)

    def width(self, k: int) -> Fraction:
        spec = self.spec
        return (spec.x(spec.N) - spec.x(0)) / (spec.N * self.ratio ** (k - 1))

    def interval(self, k: int, i: int) -> Interval:
        """The i-th level-k cell."""
        if not 1 <= i <= self.size(k):
            raise IndexError(f"cell index {i} out of range at level {k}")
        per = self.ratio ** (k - 1)
        t, j = divmod(i - 1, per)
        lo = self.spec.x(self.members[t] - 1) + j * self.width(k)
        return Interval(lo, lo + self.width(k))

    def owner(self, k: int, i: int) -> int:
        """The map index n with cell i inside I_n."""
        per = self.ratio ** (k - 1)
        return self.members[(i - 1) // per]

    def preimage(self, k: int, i: int) -> Interval:
        """D^k_i = L_n^{-1}(I^k_i) where n owns cell i."""
        n = self.owner(k, i)
        return self.spec.map(n).L.preimage(self.interval(k, i))

    def theta(self, k: int) -> frozenset[int]:
        if not 1 <= k <= self.kmax:
            raise IndexError(f"level {k} not built (kmax={self.kmax})")
        return self.thetas[k - 1]

    def theta_tilde(self, k: int) -> frozenset[int]:
        """Level-(k+1) indices of cells lying under level-k survivors."""
        T = self.ratio
        return frozenset(
            (i - 1) * T + t for i in self.theta(k) for t in range(1, T + 1)
        )

    def parent(self, k: int, i: int) -> int:
        """Level-(k-1) index of the cell containing level-k cell i."""
        if k < 2:
            raise ValueError("level-1 cells have no parent")
        return (i - 1) // self.ratio + 1

    def locate(self, k: int, iv: Interval) -> int | None:
        """Level-k index of the cell equal to ``iv``, or None."""
        w = self.width(k)
        if iv.hi - iv.lo != w:
            return None
        spec = self.spec
        # member node intervals are disjoint but possibly non-contiguous
        lows = [spec.x(n - 1) for n in self.members]
        t = bisect_right(lows, iv.lo) - 1
        if t < 0:
            return None
        n = self.members[t]
        if iv.hi > spec.x(n):
            return None
        off = (iv.lo - spec.x(n - 1)) / w
        if off.denominator != 1:
            return None
        return t * self.ratio ** (k - 1) + int(off) + 1

    def covered(self, k: int, i: int) -> list[int]:
        """Surviving level-k cells whose interval lies inside D^k_i."""
        D = self.preimage(k, i)
        w = self.width(k)
        out = []
        theta = self.theta(k)
        for s in range(self.ratio):
            lo = D.lo + s * w
            j = self.locate(k, Interval(lo, lo + w))
            if j is not None and j in theta:
                out.append(j)
        return out


def build_partition(spec: RfifSpec, component: Component, kmax: int) -> Partition:
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    if kmax > KMAX_CAP:
        raise ValueError(f"kmax={kmax} exceeds cap {KMAX_CAP}")
    part = Partition(
        spec=spec,
        component=component,
        kmax=1,
        thetas=(frozenset(range(1, len(component.members) + 1)),),
    )
    thetas = [part.thetas[0]]
    for k in range(1, kmax):
        part = Partition(spec=spec, component=component, kmax=k, thetas=tuple(thetas))
        theta_k = thetas[-1]
        nxt = set()
        for i in sorted(part.theta_tilde(k)):
            # survival: the preimage of the level-(k+1) cell must be a
            # surviving level-k cell, exactly
            j = part.locate(k, part.preimage(k + 1, i))
            if j is not None and j in theta_k:
                nxt.add(i)
        thetas.append(frozenset(nxt))
    return Partition(spec=spec, component=component, kmax=kmax, thetas=tuple(thetas))


def basic_interval(spec: RfifSpec, component: Component, k: int, i: int) -> Interval:
    """The i-th level-k cell of the piece, straight from the index formula."""
    part = Partition(
        spec=spec,
        component=component,
        kmax=1,
        thetas=(frozenset(range(1, len(component.members) + 1)),),
    )
    return part.interval(k, i)


def domain_interval(spec: RfifSpec, component: Component, k: int, i: int) -> Interval:
    part = Partition(
        spec=spec,
        component=component,
        kmax=1,
        thetas=(frozenset(range(1, len(component.members) + 1)),),
    )
    return part.preimage(k, i)


def is_stationary(partition: Partition) -> bool:
    """Whether the survivor structure repeats: every cell under a level-1
    survivor survives at level 2 (and then at every level)."""
    if partition.kmax < 2:
        raise ValueError("need at least two levels to test stationarity")
    return partition.theta(2) == partition.theta_tilde(1)
