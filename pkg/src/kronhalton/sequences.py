"""Point generation: polynomial-base Halton, digital Kronecker and hybrids.

Points are exact: each coordinate is a string of base-``p`` digits
``y_1 y_2 ... y_m`` meaning ``sum y_j p^{-j}``. Digits beyond the precision
are dropped, so membership in any box of resolution ``<= m`` is exact.

Two routes produce the same digits. The definitional route works on one
index at a time with polynomial arithmetic (:func:`halton_point`,
:func:`kronecker_point`). The matrix route multiplies base-``p`` digit
vectors of many indices by a generating matrix at once (:func:`generate`);
both constructions are F_p-linear in the digits of ``n``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterator, Optional, Sequence, TextIO

import numpy as np

from .errors import DegreeError, InvalidBaseError, ParseError
from .laurent import LaurentSeries, frac_part, poly_times_series
from .poly import (
    FieldChar,
    Poly,
    base_digits,
    check_base,
    check_pairwise_coprime,
    int_to_poly,
    poly_divmod,
    require_degree_below,
)


def digits_dtype(p: int):
    return np.uint8 if p <= 256 else np.uint16


def ceil_log(N: int, p: int) -> int:
    """Smallest ``k`` with ``p**k >= N``."""
    k, v = 0, 1
    while v < N:
        v *= p
        k += 1
    return k


def default_precision(N: int, p: int) -> int:
    return ceil_log(max(N, 1), p) + 20


# ---------------------------------------------------------------------------
# point containers


@dataclass(frozen=True)
class DigitPoint:
    """One point of ``[0,1)^s`` as per-coordinate base-``p`` digit tuples."""

    p: int
    digits: tuple

    @property
    def dim(self) -> int:
        return len(self.digits)

    @property
    def precision(self) -> int:
        return len(self.digits[0]) if self.digits else 0

    def coord(self, j: int) -> Fraction:
        num = 0
        for y in self.digits[j]:
            num = num * self.p + y
        return Fraction(num, self.p ** len(self.digits[j]))

    def coords(self) -> tuple:
        return tuple(self.coord(j) for j in range(self.dim))

    def __add__(self, other: "DigitPoint") -> "DigitPoint":
        """Concatenate coordinates."""
        return DigitPoint(self.p, self.digits + other.digits)


class PointSet:
    """``N`` points with ``s`` coordinates of ``m`` digits each.

    ``digits`` has shape ``(N, s, m)``; ``indices`` records the sequence
    index ``n`` of each row.
    """

    def __init__(self, p: int, digits: np.ndarray, indices: Optional[np.ndarray] = None):
        self.p = FieldChar(p)
        digits = np.asarray(digits)
        if digits.ndim != 3:
            raise ValueError("digits must have shape (N, s, m)")
        self.digits = digits
        if indices is None:
            indices = np.arange(digits.shape[0], dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)

    @classmethod
    def from_points(cls, points: Sequence[DigitPoint]) -> "PointSet":
        if not points:
            raise ValueError("empty point list has no dimension; use PointSet.empty")
        p = points[0].p
        arr = np.array([pt.digits for pt in points], dtype=digits_dtype(p))
        return cls(p, arr)

    @classmethod
    def empty(cls, p: int, s: int, m: int) -> "PointSet":
        return cls(p, np.zeros((0, s, m), dtype=digits_dtype(p)))

    def __len__(self) -> int:
        return self.digits.shape[0]

    @property
    def dim(self) -> int:
        return self.digits.shape[1]

    @property
    def precision(self) -> int:
        return self.digits.shape[2]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return PointSet(self.p, self.digits[i], self.indices[i])
        row = self.digits[i]
        return DigitPoint(int(self.p), tuple(tuple(int(y) for y in c) for c in row))

    def __iter__(self) -> Iterator[DigitPoint]:
        for i in range(len(self)):
            yield self[i]

    def prefix_values(self, j: int, k: int) -> np.ndarray:
        """Integers formed by the first ``k`` digits of coordinate ``j``."""
        d = self.digits[:, j, :k]
        if k == 0:
            return np.zeros(len(self), dtype=np.int64)
        if self.p ** k < (1 << 62):
            w = np.array([self.p ** (k - 1 - i) for i in range(k)], dtype=np.int64)
            return d.astype(np.int64) @ w
        w = np.array([self.p ** (k - 1 - i) for i in range(k)], dtype=object)
        return d.astype(object) @ w

    def numerators(self) -> np.ndarray:
        """``(N, s)`` integer numerators over ``p**m``."""
        cols = [self.prefix_values(j, self.precision) for j in range(self.dim)]
        if not cols:
            return np.zeros((len(self), 0), dtype=np.int64)
        return np.stack(cols, axis=1)

    def floats(self) -> np.ndarray:
        w = float(self.p) ** -np.arange(1, self.precision + 1)
        return self.digits.astype(np.float64) @ w

    def select(self, mask) -> "PointSet":
        return PointSet(self.p, self.digits[mask], self.indices[mask])

    def project(self, dims: Sequence[int]) -> "PointSet":
        return PointSet(self.p, self.digits[:, list(dims), :], self.indices)

    def with_precision(self, m: int) -> "PointSet":
        if m > self.precision:
            raise ValueError("cannot raise precision of stored points")
        return PointSet(self.p, self.digits[:, :, :m], self.indices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return (self.p == other.p and self.digits.shape == other.digits.shape
                and bool(np.array_equal(self.digits, other.digits))
                and bool(np.array_equal(self.indices, other.indices)))


# ---------------------------------------------------------------------------
# generating matrices


class GeneratingMatrix:
    """Entry oracle ``(row j >= 1, column k >= 0) -> residue``.

    Truncations are materialized with :meth:`truncate`.
    """

    def __init__(self, p: int, block: Callable[[int, int], np.ndarray], label: str = ""):
        self.p = FieldChar(p)
        self._block = block
        self.label = label

    def truncate(self, rows: int, cols: int) -> np.ndarray:
        return self._block(rows, cols)

    def entry(self, j: int, k: int) -> int:
        return int(self._block(j, k + 1)[j - 1, k])

    @classmethod
    def kronecker(cls, L: LaurentSeries) -> "GeneratingMatrix":
        return cls(L.p, lambda r, c: hankel(L, r, c), label=repr(L))

    @classmethod
    def halton(cls, b: Poly) -> "GeneratingMatrix":
        check_base(b)
        return cls(b.p, lambda r, c: halton_matrix(b, r, c), label=str(b))

    @classmethod
    def from_array(cls, p: int, arr: np.ndarray) -> "GeneratingMatrix":
        arr = np.asarray(arr, dtype=np.int64)

        def block(r, c):
            if r > arr.shape[0] or c > arr.shape[1]:
                raise ValueError("truncation exceeds stored matrix")
            return arr[:r, :c]
        return cls(p, block, label="array")


def hankel(L: LaurentSeries, rows: int, cols: int) -> np.ndarray:
    """``H[j-1, k] = a_{j+k}`` of ``{L}``, ``1 <= j <= rows``, ``0 <= k < cols``."""
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.int64)
    a = np.array(L.coeffs(1, rows + cols), dtype=np.int64)
    j = np.arange(rows)[:, None]
    k = np.arange(cols)[None, :]
    return a[j + k]


def kronecker_matrix(L: LaurentSeries, m: int) -> np.ndarray:
    """``m x m`` truncation of the Hankel generating matrix of ``{L}``."""
    return hankel(L, m, m)


def _halton_digit_positions(e: int, i: int) -> list[int]:
    # digit a_i(X) = sum alpha_l X^l fills 0-based rows e*i .. e*i+e-1,
    # most significant (alpha_{e-1}) first
    return [e * i + (e - 1 - l) for l in range(e)]


def halton_matrix(b: Poly, rows: int, cols: int) -> np.ndarray:
    """Generating matrix of the van der Corput sequence in base ``b``.

    Column ``k`` holds the output digits of ``n(X) = X^k``; the map from
    the digits of ``n`` to the output digits is F_p-linear.
    """
    check_base(b)
    e = b.deg
    out = np.zeros((rows, cols), dtype=np.int64)
    xk = Poly.one(b.p)
    for k in range(cols):
        for i, a in enumerate(base_digits(xk, b)):
            for l, row in enumerate(_halton_digit_positions(e, i)):
                if row < rows:
                    out[row, k] = a[l]
        xk = xk.shift(1)
    return out


# ---------------------------------------------------------------------------
# single-point (definitional) route


def _round_up_precision(m: int, bases: Sequence[Poly]) -> int:
    if not bases:
        return m
    step = reduce(math.lcm, (b.deg for b in bases), 1)
    return -(-m // step) * step


def _validate_bases(bases: Sequence[Poly]) -> None:
    if not bases:
        return
    p = bases[0].p
    for b in bases:
        if b.p != p:
            from .errors import FieldMismatchError

            raise FieldMismatchError(f"bases over F_{p} and F_{b.p}")
        check_base(b)
    check_pairwise_coprime(bases)


def van_der_corput_digits(n: int, b: Poly, m: int) -> tuple:
    e = b.deg
    digits = [0] * m
    for i, a in enumerate(base_digits(int_to_poly(n, b.p), b)):
        for l, row in enumerate(_halton_digit_positions(e, i)):
            if row < m:
                digits[row] = a[l]
    return tuple(digits)


def halton_point(n: int, bases: Sequence[Poly], m: int) -> DigitPoint:
    """Point ``n`` of the Halton sequence in polynomial bases."""
    bases = list(bases)
    _validate_bases(bases)
    m = _round_up_precision(m, bases)
    p = bases[0].p
    return DigitPoint(int(p), tuple(van_der_corput_digits(n, b, m) for b in bases))


def kronecker_point(n: int, L: LaurentSeries, m: int,
                    shift: Optional[LaurentSeries] = None) -> DigitPoint:
    """Digits of ``{n(X) L + V}``."""
    prod = frac_part(poly_times_series(int_to_poly(n, L.p), L))
    digits = prod.frac_coeffs(m)
    if shift is not None:
        v = shift.frac_coeffs(m)
        digits = [(a + c) % L.p for a, c in zip(digits, v)]
    return DigitPoint(int(L.p), (tuple(digits),))


@dataclass
class HybridSpec:
    """Kronecker coordinates from ``series`` followed by Halton coordinates
    in ``bases``."""

    series: tuple = ()
    bases: tuple = ()
    precision: Optional[int] = None
    label: str = ""
    p: FieldChar = field(init=False)

    def __post_init__(self):
        self.series = tuple(self.series)
        self.bases = tuple(self.bases)
        if not self.series and not self.bases:
            raise ValueError("hybrid spec needs at least one coordinate")
        ps = {int(L.p) for L in self.series} | {int(b.p) for b in self.bases}
        if len(ps) != 1:
            from .errors import FieldMismatchError

            raise FieldMismatchError(f"mixed characteristics {sorted(ps)}")
        self.p = FieldChar(ps.pop())
        _validate_bases(self.bases)

    @property
    def dim(self) -> int:
        return len(self.series) + len(self.bases)

    def resolve_precision(self, N: int) -> int:
        m = self.precision if self.precision is not None else default_precision(N, self.p)
        return _round_up_precision(m, self.bases)

    def describe(self) -> str:
        if self.label:
            return self.label
        parts = [f"kronecker:{L!r}" for L in self.series]
        parts += [f"halton:{b}" for b in self.bases]
        return ";".join(parts)


def hybrid_point(n: int, spec: HybridSpec, m: Optional[int] = None) -> DigitPoint:
    m = spec.resolve_precision(n + 1) if m is None else _round_up_precision(m, spec.bases)
    pts = [kronecker_point(n, L, m) for L in spec.series]
    if spec.bases:
        pts.append(halton_point(n, spec.bases, m))
    return reduce(lambda a, b: a + b, pts)


# ---------------------------------------------------------------------------
# batch (matrix) route


def index_digits(indices: np.ndarray, p: int, r: int) -> np.ndarray:
    """``(N, r)`` base-``p`` digits of the indices, least significant first."""
    out = np.empty((len(indices), r), dtype=np.int64)
    v = np.asarray(indices, dtype=np.int64).copy()
    for k in range(r):
        out[:, k] = v % p
        v //= p
    return out


def digital_apply(matrix: np.ndarray, ndigits: np.ndarray, p: int) -> np.ndarray:
    """Rows of ``(C @ n_vec) mod p`` for every digit vector in ``ndigits``."""
    r = ndigits.shape[1]
    return (ndigits @ matrix[:, :r].T) % p


def generate(spec: HybridSpec, N: int, start: int = 0,
             precision: Optional[int] = None) -> PointSet:
    """Points ``start .. start+N-1`` of the hybrid sequence via generating matrices."""
    p = spec.p
    stop = start + N
    m = spec.resolve_precision(stop) if precision is None else _round_up_precision(precision, spec.bases)
    r = max(1, ceil_log(stop, p))
    indices = np.arange(start, stop, dtype=np.int64)
    nd = index_digits(indices, p, r)
    dt = digits_dtype(p)
    out = np.empty((N, spec.dim, m), dtype=dt)
    for j, L in enumerate(spec.series):
        out[:, j, :] = digital_apply(hankel(L, m, r), nd, p)
    off = len(spec.series)
    for j, b in enumerate(spec.bases):
        out[:, off + j, :] = digital_apply(halton_matrix(b, m, r), nd, p)
    return PointSet(p, out, indices)


def iter_chunks(spec: HybridSpec, start: int, stop: int, precision: int,
                chunk: int = 1 << 16) -> Iterator[PointSet]:
    p = spec.p
    r = max(1, ceil_log(stop, p))
    m = _round_up_precision(precision, spec.bases)
    mats = [hankel(L, m, r) for L in spec.series] + [halton_matrix(b, m, r) for b in spec.bases]
    dt = digits_dtype(p)
    for lo in range(start, stop, chunk):
        hi = min(stop, lo + chunk)
        idx = np.arange(lo, hi, dtype=np.int64)
        nd = index_digits(idx, p, r)
        out = np.empty((hi - lo, len(mats), m), dtype=dt)
        for j, C in enumerate(mats):
            out[:, j, :] = digital_apply(C, nd, p)
        yield PointSet(p, out, idx)


def shifted_kronecker_block(L: LaurentSeries, m: int, precision: int,
                            shift: Optional[LaurentSeries] = None) -> PointSet:
    """The ``p**m`` points ``{k L + V}`` for all ``deg k < m``."""
    p = L.p
    idx = np.arange(p ** m, dtype=np.int64)
    nd = index_digits(idx, p, max(m, 1))
    digits = digital_apply(hankel(L, precision, max(m, 1)), nd, p)
    if shift is not None:
        v = np.array(shift.frac_coeffs(precision), dtype=np.int64)
        digits = (digits + v[None, :]) % p
    return PointSet(p, digits[:, None, :].astype(digits_dtype(p)), idx)


# ---------------------------------------------------------------------------
# residue blocks


def residue_block_indices(K: int, u: int, B: Poly, R: Poly) -> tuple[list[int], Poly]:
    """Indices ``n`` in ``[K p^{u+e}, (K+1) p^{u+e})`` with ``n(X) = R mod B``.

    Built constructively as ``n(X) = (r(X) + X^u C(X)) B(X) + R(X)`` with
    one fixed ``C`` and ``r`` running over all polynomials of degree
    ``< u``. Returns the sorted indices and ``C``.
    """
    p = B.p
    if B.is_zero or not B.is_monic():
        raise InvalidBaseError(f"modulus must be monic, got {B}")
    e = B.deg
    require_degree_below(R, e, "residue")
    if u < 0 or K < 0:
        raise DegreeError("u and K must be nonnegative")
    Kx = int_to_poly(K, p).shift(u + e)
    # one member of the block: K(X) X^{u+e} + M0 with M0 = (R - K X^{u+e}) mod B
    M0 = poly_divmod(R - Kx, B)[1]
    k0 = poly_divmod(Kx + M0 - R, B)[0]
    C = poly_divmod(k0, Poly.x(p, u))[0]
    base = C.shift(u)
    lo, hi = K * p ** (u + e), (K + 1) * p ** (u + e)
    out = []
    for r_int in range(p ** u):
        k = int_to_poly(r_int, p) + base
        n_poly = k * B + R
        n = _poly_to_int(n_poly)
        if not lo <= n < hi:
            raise AssertionError(f"constructed index {n} left the block [{lo},{hi})")
        out.append(n)
    out.sort()
    return out, C


def _poly_to_int(a: Poly) -> int:
    total = 0
    for c in reversed(a.coeffs):
        total = total * a.p + c
    return total


# ---------------------------------------------------------------------------
# CSV point dumps

_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _digits_to_str(ds, p: int) -> str:
    if p <= 36:
        return "".join(_DIGIT_CHARS[int(y)] for y in ds)
    return ".".join(str(int(y)) for y in ds)


def _str_to_digits(s: str, p: int) -> list[int]:
    if p <= 36:
        out = [_DIGIT_CHARS.index(ch) for ch in s]
    else:
        out = [int(t) for t in s.split(".")] if s else []
    if any(y >= p for y in out):
        raise ParseError(f"digit out of range in {s!r}")
    return out


def write_points_csv(points: PointSet, fh: TextIO, spec_text: str = "") -> None:
    p = int(points.p)
    fh.write(f"# p={p}\n")
    fh.write(f"# spec={spec_text}\n")
    fh.write(f"# precision={points.precision}\n")
    floats = points.floats() if len(points) else np.zeros((0, points.dim))
    for i in range(len(points)):
        row = [str(int(points.indices[i]))]
        for j in range(points.dim):
            row.append(_digits_to_str(points.digits[i, j], p))
            row.append(repr(float(floats[i, j])))
        fh.write(", ".join(row) + "\n")


def points_to_csv(points: PointSet, spec_text: str = "") -> str:
    buf = io.StringIO()
    write_points_csv(points, buf, spec_text)
    return buf.getvalue()


def read_points_csv(fh: TextIO) -> tuple[PointSet, dict]:
    meta: dict = {}
    rows = []
    for line in fh:
        line = line.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value.strip()
            continue
        rows.append([c.strip() for c in line.split(",")])
    if "p" not in meta or "precision" not in meta:
        raise ParseError("missing '# p=' or '# precision=' header")
    try:
        p = int(meta["p"])
        m = int(meta["precision"])
    except ValueError as exc:
        raise ParseError("bad header value") from exc
    if not rows:
        raise ParseError("point file has no rows")
    s = (len(rows[0]) - 1) // 2
    if s < 1 or any(len(r) != 2 * s + 1 for r in rows):
        raise ParseError("inconsistent column count")
    digits = np.zeros((len(rows), s, m), dtype=digits_dtype(p))
    indices = np.zeros(len(rows), dtype=np.int64)
    for i, r in enumerate(rows):
        indices[i] = int(r[0])
        for j in range(s):
            ds = _str_to_digits(r[1 + 2 * j], p)
            if len(ds) != m:
                raise ParseError(f"row {i}: expected {m} digits, got {len(ds)}")
            digits[i, j] = ds
    meta["p"], meta["precision"] = p, m
    return PointSet(p, digits, indices), meta
