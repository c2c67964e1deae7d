"""Problem instances: parsing, representation and validation.

An instance is a set of interpolation nodes plus one map block per interval.
Node breakpoints are exact rationals; node heights are binary64.  The affine
horizontal map of each block is derived from its (ell, r, orientation)
triple, so it carries the target interval onto the source interval exactly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .intervals import Interval
from .polynomials import Polynomial, abs_range

INTERP_TOL = 1e-9


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class AffineMap:
    """x -> slope*x + intercept with exact rational coefficients."""

    slope: Fraction
    intercept: Fraction

    def __post_init__(self) -> None:
        if self.slope == 0:
            raise ValueError("affine map must have nonzero slope")

    def __call__(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept

    def inverse(self, y: Fraction) -> Fraction:
        return (y - self.intercept) / self.slope

    def image(self, iv: Interval) -> Interval:
        return Interval.sorted(self(iv.lo), self(iv.hi))

    def preimage(self, iv: Interval) -> Interval:
        return Interval.sorted(self.inverse(iv.lo), self.inverse(iv.hi))


@dataclass(frozen=True)
class MapSpec:
    n: int
    ell: int
    r: int
    orientation: int  # +1 or -1, the sign of L.slope
    L: AffineMap
    S: Polynomial
    q: Polynomial


@dataclass(frozen=True)
class RfifSpec:
    nodes: tuple[tuple[Fraction, float], ...]
    maps: tuple[MapSpec, ...]

    @property
    def N(self) -> int:
        return len(self.nodes) - 1

    def x(self, i: int) -> Fraction:
        return self.nodes[i][0]

    def y(self, i: int) -> float:
        return self.nodes[i][1]

    def interval(self, n: int) -> Interval:
        """I_n = [x_{n-1}, x_n]."""
        return Interval(self.x(n - 1), self.x(n))

    def domain(self, n: int) -> Interval:
        """D_n = [x_{ell(n)}, x_{r(n)}]."""
        m = self.maps[n - 1]
        return Interval(self.x(m.ell), self.x(m.r))

    def map(self, n: int) -> MapSpec:
        return self.maps[n - 1]


@dataclass(frozen=True)
class Violation:
    code: str
    map_index: int | None
    message: str

    def __str__(self) -> str:
        midx = "-" if self.map_index is None else str(self.map_index)
        return f"{self.code}\tmap={midx}\t{self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    ratios: dict[int, int] = field(default_factory=dict)  # component index -> T_r
    a4_checked: bool = False

    @property
    def passed(self) -> bool:
        return not self.violations

    def serialize(self) -> str:
        return "\n".join(str(v) for v in self.violations)


# ---------------------------------------------------------------------------
# parsing

_NUM = r"-?\d+(?:/\d+|\.\d+)?(?:[eE][+-]?\d+)?"


def _parse_rational(tok: str, line: int) -> Fraction:
    tok = tok.strip()
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad rational literal {tok!r}", line)


def _parse_list(raw: str, line: int) -> list[Fraction]:
    raw = raw.strip()
    if not (raw.startswith("[") and raw.endswith("]")):
        raise ConfigError(f"expected a [...] list, got {raw!r}", line)
    inner = raw[1:-1].strip()
    if not inner:
        return []
    return [_parse_rational(tok, line) for tok in inner.split(",")]


def derive_affine(spec_x: list[Fraction], n: int, ell: int, r: int, orientation: int) -> AffineMap:
    """The unique affine bijection of [x_ell, x_r] onto [x_{n-1}, x_n] with the
    requested slope sign."""
    d_lo, d_hi = spec_x[ell], spec_x[r]
    i_lo, i_hi = spec_x[n - 1], spec_x[n]
    if orientation > 0:
        slope = (i_hi - i_lo) / (d_hi - d_lo)
        intercept = i_lo - slope * d_lo
    else:
        slope = (i_lo - i_hi) / (d_hi - d_lo)
        intercept = i_hi - slope * d_lo
    return AffineMap(slope, intercept)


def parse_spec(text: str) -> RfifSpec:
    xs: list[Fraction] | None = None
    ys: list[float] | None = None
    # raw map blocks: list of dicts key -> (value string, line)
    blocks: list[dict[str, tuple[str, int]]] = []
    section: str | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[data]":
            section = "data"
            continue
        if line == "[[map]]":
            section = "map"
            blocks.append({})
            continue
        if line.startswith("["):
            raise ConfigError(f"unknown section {line!r}", lineno)
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if section == "data":
            if key == "x":
                xs = _parse_list(value, lineno)
            elif key == "y":
                ys = [float(v) for v in _parse_list(value, lineno)]
            else:
                raise ConfigError(f"unknown [data] key {key!r}", lineno)
        elif section == "map":
            blocks[-1][key] = (value, lineno)
        else:
            raise ConfigError("key outside any section", lineno)

    if xs is None or ys is None:
        raise ConfigError("missing [data] section with x and y")
    if len(xs) != len(ys):
        raise ConfigError(f"x has {len(xs)} entries but y has {len(ys)}")
    if len(xs) < 3:
        raise ConfigError("need at least 3 nodes (N >= 2)")
    N = len(xs) - 1
    for i in range(N):
        if xs[i] >= xs[i + 1]:
            raise ConfigError(f"x values not strictly increasing at index {i + 1}")
    if len(blocks) != N:
        raise ConfigError(f"map count != N: {len(blocks)} map blocks for N={N}")

    maps: list[MapSpec | None] = [None] * N
    for blk in blocks:
        line0 = min(ln for _, ln in blk.values()) if blk else 0

        def geti(key: str) -> tuple[str, int]:
            if key not in blk:
                raise ConfigError(f"map block missing key {key!r}", line0)
            return blk[key]

        v, ln = geti("n")
        n = int(v)
        if not 1 <= n <= N:
            raise ConfigError(f"map index n={n} out of range 1..{N}", ln)
        if maps[n - 1] is not None:
            raise ConfigError(f"duplicate map index n={n}", ln)
        v, ln = geti("ell")
        ell = int(v)
        v, ln_r = geti("r")
        r = int(v)
        if not (0 <= ell < r <= N):
            raise ConfigError(f"need 0 <= ell < r <= N, got ell={ell}, r={r}", ln_r)
        v, ln = geti("orientation")
        v = v.strip().strip('"').strip("'")
        if v not in ("+", "-"):
            raise ConfigError(f"orientation must be \"+\" or \"-\", got {v!r}", ln)
        orientation = 1 if v == "+" else -1
        v, ln = geti("S")
        S = Polynomial(tuple(_parse_list(v, ln)))
        v, ln = geti("q")
        q = Polynomial(tuple(_parse_list(v, ln)))
        L = derive_affine(xs, n, ell, r, orientation)
        maps[n - 1] = MapSpec(n=n, ell=ell, r=r, orientation=orientation, L=L, S=S, q=q)

    return RfifSpec(nodes=tuple(zip(xs, ys)), maps=tuple(maps))  # type: ignore[arg-type]


def serialize_spec(spec: RfifSpec) -> str:
    def fr(v: Fraction) -> str:
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    lines = ["[data]"]
    lines.append("x = [" + ", ".join(fr(x) for x, _ in spec.nodes) + "]")
    lines.append("y = [" + ", ".join(repr(y) for _, y in spec.nodes) + "]")
    for m in spec.maps:
        lines.append("")
        lines.append("[[map]]")
        lines.append(f"n = {m.n}")
        lines.append(f"ell = {m.ell}")
        lines.append(f"r = {m.r}")
        lines.append(f'orientation = "{"+" if m.orientation > 0 else "-"}"')
        lines.append("S = [" + ", ".join(fr(c) for c in m.S.coeffs) + "]")
        lines.append("q = [" + ", ".join(fr(c) for c in m.q.coeffs) + "]")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation


def validate_spec(spec: RfifSpec, with_components: bool = True) -> ValidationReport:
    """Check uniform spacing, strict scaling bound, the interpolation
    constraint, and (when requested) the per-component integer ratio."""
    report = ValidationReport()
    N = spec.N
    spacing = (spec.x(N) - spec.x(0)) / N
    for n in range(1, N + 1):
        if spec.x(n) - spec.x(n - 1) != spacing:
            report.violations.append(
                Violation("A1", None, f"node spacing x_{n}-x_{n - 1} != (x_N-x_0)/N")
            )
            break

    for m in spec.maps:
        D = spec.domain(m.n)
        _, s_hi = abs_range(m.S, D)
        if not s_hi < 1.0:
            report.violations.append(
                Violation("A2", m.n, f"sup|S_{m.n}| = {s_hi} >= 1 on D_{m.n}")
            )

    for m in spec.maps:
        D = spec.domain(m.n)
        # endpoint images of L are exact by construction; check y coordinates
        src = [(D.lo, spec.y(m.ell)), (D.hi, spec.y(m.r))]
        for xe, ye in src:
            img_x = m.L(xe)
            target_n = m.n - 1 if img_x == spec.x(m.n - 1) else m.n
            img_y = float(m.S.eval_exact(xe)) * ye + float(m.q.eval_exact(xe))
            if abs(img_y - spec.y(target_n)) > INTERP_TOL:
                report.violations.append(
                    Violation(
                        "INTERP",
                        m.n,
                        f"W_{m.n} sends ({xe},{ye}) to y={img_y}, expected {spec.y(target_n)}",
                    )
                )

    if with_components:
        from .graph import RatioError, build_address_graph, components

        try:
            comps = components(build_address_graph(spec), spec)
        except RatioError as exc:
            report.violations.append(Violation("A4", exc.map_index, str(exc)))
        else:
            report.ratios = {c.index: c.ratio for c in comps}
        report.a4_checked = True

    return report
