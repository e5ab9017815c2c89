"""Distribution diagnostics for digit point sets.

Everything here is exact. Boxes have base-``p`` rational endpoints and
membership is decided on digit prefixes; discrepancies are returned as
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import CapExceededError, CardinalityError, ResolutionError
from .parallel import ordered_map
from .sequences import DigitPoint, GeneratingMatrix, PointSet

DEFAULT_DISC_CAP = 4096
T_PARAM_MAX_S = 4
T_PARAM_MAX_M = 20

PointsLike = Union[PointSet, Sequence[DigitPoint]]


def as_pointset(points: PointsLike, p: Optional[int] = None,
                s: Optional[int] = None, m: Optional[int] = None) -> PointSet:
    if isinstance(points, PointSet):
        return points
    points = list(points)
    if not points:
        if p is None:
            raise ValueError("empty point list needs p, s and m")
        return PointSet.empty(p, s or 1, m or 1)
    return PointSet.from_points(points)


# ---------------------------------------------------------------------------
# boxes


@dataclass(frozen=True)
class Box:
    """Axis-parallel box ``prod [lower_j, upper_j) / p**res_j``.

    The lower end is closed and the upper end open unless the flags say
    otherwise.
    """

    p: int
    lower: tuple
    upper: tuple
    res: tuple
    lower_open: tuple = ()
    upper_closed: tuple = ()

    def __post_init__(self):
        s = len(self.res)
        if len(self.lower) != s or len(self.upper) != s:
            raise ValueError("lower, upper and res must have equal length")
        if not self.lower_open:
            object.__setattr__(self, "lower_open", (False,) * s)
        if not self.upper_closed:
            object.__setattr__(self, "upper_closed", (False,) * s)
        for a, b, k, closed in zip(self.lower, self.upper, self.res, self.upper_closed):
            # a closed side may collapse to the single value a (zero volume)
            if k < 0 or not 0 <= a <= b <= self.p ** k or (a == b and not closed):
                raise ValueError(f"bad box side [{a}, {b}) / {self.p}^{k}")

    @classmethod
    def elementary(cls, p: int, d: Sequence[int], a: Sequence[int]) -> "Box":
        """``prod [a_j, a_j + 1) / p**d_j``."""
        return cls(p, tuple(a), tuple(x + 1 for x in a), tuple(d))

    @classmethod
    def anchored(cls, p: int, res: Sequence[int], upper: Sequence[int],
                 closed: bool = False) -> "Box":
        """``prod [0, upper_j / p**res_j)`` (closed on top if asked)."""
        s = len(res)
        return cls(p, (0,) * s, tuple(upper), tuple(res), upper_closed=(closed,) * s)

    @classmethod
    def unit(cls, p: int, s: int) -> "Box":
        return cls(p, (0,) * s, (1,) * s, (0,) * s)

    @property
    def dim(self) -> int:
        return len(self.res)

    @property
    def resolution(self) -> int:
        return max(self.res, default=0)

    def volume(self) -> Fraction:
        v = Fraction(1)
        for a, b, k in zip(self.lower, self.upper, self.res):
            v *= Fraction(b - a, self.p ** k)
        return v

    def side(self, j: int) -> tuple[Fraction, Fraction]:
        q = self.p ** self.res[j]
        return Fraction(self.lower[j], q), Fraction(self.upper[j], q)

    def __str__(self) -> str:
        parts = []
        for j in range(self.dim):
            lo, hi = self.side(j)
            left = "(" if self.lower_open[j] else "["
            right = "]" if self.upper_closed[j] else ")"
            parts.append(f"{left}{lo},{hi}{right}")
        return "x".join(parts)


def box_mask(points: PointSet, box: Box) -> np.ndarray:
    """Boolean membership of every point, decided on digit prefixes."""
    if points.dim != box.dim:
        raise ValueError(f"box has dimension {box.dim}, points {points.dim}")
    if box.resolution > points.precision:
        raise ResolutionError(
            f"box resolution {box.resolution} exceeds point precision {points.precision}")
    mask = np.ones(len(points), dtype=bool)
    for j in range(box.dim):
        k = box.res[j]
        v = points.prefix_values(j, k)
        a, b = box.lower[j], box.upper[j]
        if box.lower_open[j] or box.upper_closed[j]:
            rest_zero = ~points.digits[:, j, k:].any(axis=1)
        if box.lower_open[j]:
            mask &= (v > a) | ((v == a) & ~rest_zero)
        else:
            mask &= v >= a
        if box.upper_closed[j]:
            mask &= (v < b) | ((v == b) & rest_zero)
        else:
            mask &= v < b
    return mask


def count_in_box(points: PointsLike, box: Box) -> int:
    """``#{n : z_n in box}`` by exact digit comparison."""
    if not isinstance(points, PointSet) and not list(points):
        return 0
    pts = as_pointset(points)
    if len(pts) == 0:
        return 0
    return int(box_mask(pts, box).sum())


# ---------------------------------------------------------------------------
# ranks and t-values


def rank_fp(matrix, p: int) -> int:
    """Row rank over F_p."""
    return int(_kernels.rank_mod_p(np.asarray(matrix, dtype=np.int64), int(p)))


def compositions(total: int, parts: int) -> Iterator[tuple]:
    """All ``(d_1..d_parts)`` of nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _truncations(matrices, rows: int, cols: int) -> list[np.ndarray]:
    out = []
    for C in matrices:
        if isinstance(C, GeneratingMatrix):
            out.append(C.truncate(rows, cols))
        else:
            arr = np.asarray(C, dtype=np.int64)
            if arr.shape[0] < rows or arr.shape[1] < cols:
                raise ValueError(f"matrix {arr.shape} smaller than {rows}x{cols}")
            out.append(arr[:rows, :cols])
    return out


def stacked_rank(blocks: Sequence[np.ndarray], ds: Sequence[int], p: int) -> int:
    """Rank of the first ``d_i`` rows of every block, stacked."""
    parts = [b[:d] for b, d in zip(blocks, ds) if d]
    if not parts:
        return 0
    return rank_fp(np.vstack(parts), p)


def t_param(matrices, m: int, p: Optional[int] = None) -> int:
    """Smallest ``T`` such that every composition ``d`` of ``m - T`` gives a
    stacked ``(m-T) x m`` matrix of full rank."""
    s = len(matrices)
    if s < 1 or m < 1:
        raise ValueError("need s >= 1 and m >= 1")
    if s > T_PARAM_MAX_S or m > T_PARAM_MAX_M:
        raise CapExceededError(f"t_param is capped at s <= {T_PARAM_MAX_S}, m <= {T_PARAM_MAX_M}")
    if p is None:
        p = next((int(C.p) for C in matrices if isinstance(C, GeneratingMatrix)), None)
        if p is None:
            raise ValueError("p is required for plain arrays")
    blocks = _truncations(matrices, m, m)
    for T in range(m + 1):
        k = m - T
        if all(stacked_rank(blocks, ds, p) == k for ds in compositions(k, s)):
            return T
    return m  # unreachable: k = 0 always passes


# ---------------------------------------------------------------------------
# nets


@dataclass
class NetReport:
    m: int
    s: int
    t: int
    p: int
    violations: list = field(default_factory=list)  # (Box, expected, observed)

    @property
    def passed(self) -> bool:
        return not self.violations

    def lines(self, limit: Optional[int] = 20) -> list[str]:
        head = f"{'PASS' if self.passed else 'FAIL'} t={self.t} m={self.m} s={self.s}"
        out = [head]
        shown = self.violations if limit is None else self.violations[:limit]
        for box, expected, observed in shown:
            out.append(f"interval={box} expected={expected} observed={observed}")
        if limit is not None and len(self.violations) > limit:
            out.append(f"more_violations={len(self.violations) - limit}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def _unrank(idx: int, ds: Sequence[int], p: int) -> tuple:
    a = []
    for d in reversed(ds):
        q = p ** d
        a.append(idx % q)
        idx //= q
    return tuple(reversed(a))


def is_net(points: PointsLike, t: int, m: int) -> NetReport:
    """Check the ``(t, m, s)``-net property by exact counting.

    The verdict is decided by the elementary intervals of volume
    ``p**(t-m)``. Coarser elementary intervals (each a disjoint union of
    finer ones, so they cannot fail alone) are scanned first so that the
    report leads with the largest unbalanced intervals.
    """
    pts = as_pointset(points)
    p = int(pts.p)
    if len(pts) != p ** m:
        raise CardinalityError(f"a net with m={m} needs {p ** m} points, got {len(pts)}")
    if not 0 <= t <= m:
        raise ValueError("need 0 <= t <= m")
    k = m - t
    s = pts.dim
    if k > pts.precision:
        raise ResolutionError(f"resolution {k} exceeds point precision {pts.precision}")

    def check(ds):
        level = sum(ds)
        quota = p ** (m - level)
        idx = np.zeros(len(pts), dtype=np.int64)
        for j, d in enumerate(ds):
            idx = idx * p ** d + pts.prefix_values(j, d)
        counts = np.bincount(idx, minlength=p ** level)
        bad = np.nonzero(counts != quota)[0]
        return [(Box.elementary(p, ds, _unrank(int(c), ds, p)), quota, int(counts[c]))
                for c in bad]

    report = NetReport(m=m, s=s, t=t, p=p)
    final = list(compositions(k, s))
    failed = False
    for found in ordered_map(check, final):
        failed = failed or bool(found)
    if failed:
        for level in range(1, k + 1):
            for found in ordered_map(check, list(compositions(level, s))):
                report.violations.extend(found)
    return report


# ---------------------------------------------------------------------------
# discrepancy


def format_rational(x: Fraction, p: int) -> str:
    """``num/p^k`` when the denominator is a power of ``p``, else ``num/den``."""
    x = Fraction(x)
    den, k = x.denominator, 0
    while den % p == 0:
        den //= p
        k += 1
    if den == 1:
        return f"{x.numerator}/{p}^{k}"
    return f"{x.numerator}/{x.denominator}"


def rational_fields(x: Fraction, p: int) -> dict:
    x = Fraction(x)
    return {"value": str(x), "pk": format_rational(x, p), "decimal": f"{float(x):.12g}"}


def star_disc_1d(points: PointsLike) -> Fraction:
    """Exact star discrepancy of a one-dimensional point set,
    ``max_i max(i/N - x_(i), x_(i) - (i-1)/N)`` over the sorted points."""
    pts = as_pointset(points)
    if pts.dim != 1:
        raise ValueError("star_disc_1d needs one-dimensional points")
    N = len(pts)
    if N == 0:
        raise ValueError("discrepancy of an empty point set")
    P = int(pts.p) ** pts.precision
    v = np.sort(pts.numerators()[:, 0])
    if N * P < (1 << 62) and v.dtype != object:
        i = np.arange(1, N + 1, dtype=np.int64)
        num = max(int((i * P - N * v).max()), int((N * v - (i - 1) * P).max()))
    else:
        num = max(max(i * P - N * int(x), N * int(x) - (i - 1) * P)
                  for i, x in enumerate(v.tolist(), start=1))
    return Fraction(num, N * P)


@dataclass(frozen=True)
class StarDiscrepancy:
    value: Fraction
    N: int
    s: int
    p: int
    precision: int
    corner: tuple  # upper corner of a maximizing anchored box
    closed: bool   # whether that box includes its upper faces

    def witness(self) -> Box:
        res = (self.precision,) * self.s
        return Box.anchored(self.p, res, self.corner, closed=self.closed)


def star_disc_details(points: PointsLike, cap: int = DEFAULT_DISC_CAP) -> StarDiscrepancy:
    pts = as_pointset(points)
    N, s = len(pts), pts.dim
    if N == 0:
        raise ValueError("discrepancy of an empty point set")
    if s > 3:
        raise CapExceededError("exact star discrepancy supports s <= 3; "
                               "use extreme_disc_lower_bound on chosen boxes instead")
    if N > cap:
        raise CapExceededError(f"N={N} exceeds the exact-discrepancy cap {cap}; "
                               "use extreme_disc_lower_bound on chosen boxes instead")
    P = int(pts.p) ** pts.precision
    num, corner, closed = _kernels.star_corner_max(pts.numerators(), P)
    return StarDiscrepancy(Fraction(int(num), N * P ** s), N, s, int(pts.p),
                           pts.precision, tuple(int(c) for c in corner), bool(closed))


def star_disc_exact(points: PointsLike, cap: int = DEFAULT_DISC_CAP) -> Fraction:
    """Exact ``D*_N`` for ``s <= 3`` by sweeping the corners of the point
    coordinate grid (plus 1) with closed and open counts."""
    return star_disc_details(points, cap).value


def extreme_disc_lower_bound(points: PointsLike, box: Box) -> Fraction:
    """``|A_N(box)/N - vol(box)|``, a certified lower bound on ``D_N``."""
    pts = as_pointset(points)
    N = len(pts)
    if N == 0:
        raise ValueError("discrepancy of an empty point set")
    return abs(Fraction(count_in_box(pts, box), N) - box.volume())
