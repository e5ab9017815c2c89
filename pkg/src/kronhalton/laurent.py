"""Formal Laurent series over F_p and their continued fractions.

A series ``L = sum_{i >= w} a_i X^{-i}`` is represented as a coefficient
oracle: ``L.coeff(i)`` returns ``a_i``. Coefficients are produced by a
backing (rational function, periodic continued fraction, the gap series
``sum X^{-(3*2^k - 2)}``, a seeded random stream, or a finite truncation)
and memoized per series under a lock, so a series may be shared between
threads.

Continued fractions of non-rational series are read off a finite prefix:
the prefix ``a_1..a_M`` is the rational ``S/X^M`` and its Euclidean
expansion agrees with the true one for every quotient ``A_h`` with
``2*d_h <= M`` (``d_h = deg Q_h``), because then ``P_h/Q_h`` still
approximates the true series to order ``> 2*d_h``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    OutOfScopeError,
    ParseError,
    PrecisionExhaustedError,
    ZeroSeriesError,
)
from .poly import FieldChar, Poly, _divmod_lists, _trim, as_poly, parse_poly, poly_divmod

_BLOCK = 64


class InsufficientQuotientsError(PrecisionExhaustedError):
    """A finite quotient list does not determine the requested coefficients."""


# ---------------------------------------------------------------------------
# series backings


class LaurentSeries:
    """Coefficient oracle for ``sum_{i >= start} a_i X^{-i}``.

    ``start`` is a lower bound for the valuation index: every coefficient
    with index below it is zero. ``available`` is the exclusive upper index
    bound for finite backings and ``None`` for unbounded ones.
    """

    available: Optional[int] = None

    def __init__(self, p: int, start: int):
        self.p = FieldChar(p)
        self.start = start
        self._memo: list[int] = []
        self._lock = threading.Lock()

    # subclasses produce coefficients for indices lo..hi-1, called with
    # lo equal to the first index not yet memoized
    def _generate(self, lo: int, hi: int) -> list[int]:
        raise NotImplementedError

    def _extend(self, hi: int) -> None:
        with self._lock:
            have = self.start + len(self._memo)
            if have >= hi:
                return
            if self.available is not None and hi > self.available:
                raise PrecisionExhaustedError(
                    f"coefficient index {hi - 1} beyond available {self.available - 1}")
            target = max(hi, have + max(len(self._memo), _BLOCK))
            if self.available is not None:
                target = min(target, self.available)
            self._memo.extend(self._generate(have, target))

    def coeff(self, i: int) -> int:
        if i < self.start:
            return 0
        off = i - self.start
        if off >= len(self._memo):
            self._extend(i + 1)
        return self._memo[off]

    def coeffs(self, lo: int, hi: int) -> list[int]:
        """Coefficients ``a_lo, ..., a_{hi-1}``."""
        if hi <= lo:
            return []
        if hi > self.start + len(self._memo):
            self._extend(hi)
        out = [0] * max(0, min(hi, self.start) - lo)
        a = max(lo, self.start) - self.start
        b = hi - self.start
        if b > a:
            out.extend(self._memo[a:b])
        return out

    def frac_coeffs(self, m: int) -> list[int]:
        """The fractional-part coefficients ``a_1..a_m``."""
        return self.coeffs(1, m + 1)

    def polynomial_part(self) -> Poly:
        if self.start > 0:
            return Poly.zero(self.p)
        c = self.coeffs(self.start, 1)
        # index i <-> X^{-i}
        return Poly(list(reversed(c)), self.p)

    def valuation_index(self, limit: int = 4096) -> Optional[int]:
        """Index ``w`` of the first nonzero coefficient, or ``None`` if none
        is found below ``limit``."""
        i = self.start
        while i < limit:
            hi = min(limit, i + _BLOCK)
            if self.available is not None:
                hi = min(hi, self.available)
                if hi <= i:
                    return None
            for k, c in enumerate(self.coeffs(i, hi)):
                if c:
                    return i + k
            i = hi
        return None

    @property
    def is_known_zero(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"<{type(self).__name__} p={int(self.p)}>"


class RationalSeries(LaurentSeries):
    """Expansion of ``P/Q`` by long division."""

    def __init__(self, P: Poly, Q: Poly):
        if Q.is_zero:
            raise ZeroDivisionError("rational series with zero denominator")
        if P.p != Q.p:
            from .errors import FieldMismatchError

            raise FieldMismatchError(f"F_{P.p} vs F_{Q.p}")
        self.P, self.Q = P, Q
        start = 1 if P.is_zero else Q.deg - P.deg
        super().__init__(P.p, start)
        self._poly, rem = poly_divmod(P, Q)
        self._rem = list(rem.coeffs) + [0] * (len(Q.coeffs) - 1 - len(rem.coeffs))
        self._qinv = pow(Q.lc, -1, self.p)
        self._next_frac = 1  # index of the next digit the division yields

    @property
    def is_known_zero(self) -> bool:
        return self.P.is_zero

    def _generate(self, lo: int, hi: int) -> list[int]:
        out = []
        i = lo
        while i < hi and i <= 0:
            out.append(self._poly[-i])
            i += 1
        if i < hi:
            digits = _long_division_step(self._rem, self.Q.coeffs, self._qinv,
                                         self.p, hi - self._next_frac)
            self._next_frac = hi
            out.extend(digits[i - (hi - len(digits)):])
        return out

    def __repr__(self) -> str:
        return f"RationalSeries({self.P}/{self.Q}, p={int(self.p)})"


def _long_division_step(rem: list, q: Sequence[int], qinv: int, p: int,
                        count: int) -> list[int]:
    """Advance the fractional expansion of ``rem/q`` by ``count`` digits.

    ``rem`` (length ``deg q``) is updated in place.
    """
    dq = len(q) - 1
    out = []
    for _ in range(count):
        if dq == 0:
            out.append(0)
            continue
        c = rem[-1] * qinv % p
        # rem <- rem * X - c * q  (degree drops back below dq)
        new = [0] + rem[:-1]
        if c:
            for j in range(dq):
                new[j] = (new[j] - c * q[j]) % p
        rem[:] = new
        out.append(c)
    return out


def rational_digits(R: Sequence[int], Q: Sequence[int], p: int, count: int) -> list[int]:
    """First ``count`` fractional coefficients of ``R/Q`` with ``deg R < deg Q``."""
    dq = len(Q) - 1
    rem = list(R) + [0] * (dq - len(R))
    return _long_division_step(rem, Q, pow(Q[-1], -1, p), p, count)


class Gap2Series(LaurentSeries):
    """``sum_{k >= 1} X^{-(2^{k+1} - 2^{k-1} - 2)}`` over F_2.

    Its nonzero coefficients sit at indices 1, 4, 10, 22, 46, ...
    """

    def __init__(self):
        super().__init__(2, 1)

    @staticmethod
    def is_gap_index(i: int) -> bool:
        j = i + 2
        if i < 1 or j % 3:
            return False
        j //= 3
        return j & (j - 1) == 0

    def _generate(self, lo: int, hi: int) -> list[int]:
        return [1 if self.is_gap_index(i) else 0 for i in range(lo, hi)]

    def __repr__(self) -> str:
        return "Gap2Series()"


class RandomSeries(LaurentSeries):
    """Haar-random element of H: i.i.d. uniform ``a_1, a_2, ...``.

    Block ``b`` of coefficients is drawn from a Philox stream keyed by the
    seed with the block number in the counter, so any prefix is reproducible
    and extension never re-draws earlier coefficients.
    """

    def __init__(self, p: int, seed: int):
        super().__init__(p, 1)
        self.seed = int(seed)

    def _block(self, b: int) -> np.ndarray:
        bitgen = np.random.Philox(key=[self.seed % (1 << 64), 0], counter=[0, b, 0, 0])
        return np.random.Generator(bitgen).integers(0, self.p, _BLOCK)

    def _generate(self, lo: int, hi: int) -> list[int]:
        out = []
        i = lo
        while i < hi:
            b, off = divmod(i - 1, _BLOCK)
            block = self._block(b)
            take = min(hi - i, _BLOCK - off)
            out.extend(int(c) for c in block[off:off + take])
            i += take
        return out

    def __repr__(self) -> str:
        return f"RandomSeries(p={int(self.p)}, seed={self.seed})"


class TruncatedSeries(LaurentSeries):
    """A finite coefficient list ``a_w, ..., a_{w+len-1}``."""

    def __init__(self, p: int, w: int, coeffs: Sequence[int]):
        super().__init__(p, w)
        self._data = [int(c) % self.p for c in coeffs]
        self.available = w + len(self._data)

    def _generate(self, lo: int, hi: int) -> list[int]:
        return self._data[lo - self.start:hi - self.start]

    def __repr__(self) -> str:
        return f"TruncatedSeries(p={int(self.p)}, w={self.start}, n={len(self._data)})"


class ProductSeries(LaurentSeries):
    """``B * L`` for a polynomial ``B``."""

    def __init__(self, B: Poly, L: LaurentSeries):
        super().__init__(L.p, L.start - B.deg)
        self.B, self.L = B, L
        if L.available is not None:
            self.available = L.available - B.deg

    def _generate(self, lo: int, hi: int) -> list[int]:
        b = self.B.coeffs
        e = len(b) - 1
        src = self.L.coeffs(lo, hi + e)
        p = self.p
        out = []
        for i in range(hi - lo):
            s = 0
            for k, bk in enumerate(b):
                if bk:
                    s += bk * src[i + k]
            out.append(s % p)
        return out

    def __repr__(self) -> str:
        return f"ProductSeries({self.B} * {self.L!r})"


class FracPartSeries(LaurentSeries):
    def __init__(self, L: LaurentSeries):
        super().__init__(L.p, max(1, L.start))
        self.L = L
        self.available = L.available

    def _generate(self, lo: int, hi: int) -> list[int]:
        return self.L.coeffs(lo, hi)

    def __repr__(self) -> str:
        return f"FracPartSeries({self.L!r})"


# ---------------------------------------------------------------------------
# continued-fraction specs


@dataclass(frozen=True)
class CFSpec:
    """``[a0; preperiod..., period, period, ...]``; empty period = finite."""

    a0: Poly
    preperiod: tuple = ()
    period: tuple = ()

    def __post_init__(self):
        for q in self.preperiod + self.period:
            if q.is_zero or q.deg < 1:
                raise ValueError(f"partial quotient {q} must have degree >= 1")

    @property
    def p(self) -> FieldChar:
        return self.a0.p

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    def __len__(self) -> int:
        if self.period:
            raise TypeError("periodic continued fraction has no length")
        return len(self.preperiod)

    def quotient(self, h: int) -> Poly:
        """``A_h`` for ``h >= 1``."""
        if h <= len(self.preperiod):
            return self.preperiod[h - 1]
        if not self.period:
            raise IndexError(h)
        return self.period[(h - 1 - len(self.preperiod)) % len(self.period)]

    def convergent(self, h: int) -> tuple[Poly, Poly]:
        P, Q = _convergents([self.a0] + [self.quotient(i) for i in range(1, h + 1)])
        return P[-1], Q[-1]


def _convergents(quots: Sequence[Poly]) -> tuple[list[Poly], list[Poly]]:
    """``P_0..P_h``, ``Q_0..Q_h`` for ``[A_0; A_1..A_h]``."""
    p = quots[0].p
    P_prev, P = Poly.one(p), quots[0]
    Q_prev, Q = Poly.zero(p), Poly.one(p)
    Ps, Qs = [P], [Q]
    for A in quots[1:]:
        P_prev, P = P, A * P + P_prev
        Q_prev, Q = Q, A * Q + Q_prev
        Ps.append(P)
        Qs.append(Q)
    return Ps, Qs


class CFSeries(LaurentSeries):
    """Unbounded coefficient oracle of a periodic continued fraction."""

    def __init__(self, spec: CFSpec):
        if not spec.is_periodic:
            raise ValueError("use cf_series() for finite continued fractions")
        a0 = spec.a0
        super().__init__(spec.p, 1 if a0.is_zero else -a0.deg)
        self.spec = spec

    def _generate(self, lo: int, hi: int) -> list[int]:
        out = []
        i = lo
        while i < hi and i <= 0:
            out.append(self.spec.a0[-i])
            i += 1
        if i < hi:
            frac = _frac_digits_from_cf(self.spec, hi - 1)
            out.extend(frac[i - 1:hi - 1])
        return out

    def __repr__(self) -> str:
        return f"CFSeries({format_cf_spec(self.spec)})"


def _frac_digits_from_cf(spec: CFSpec, m: int, exact: bool = True) -> list[int]:
    """Fractional coefficients ``a_1..a_m`` of the value of ``spec``."""
    p = spec.p
    if m <= 0:
        return []
    one, zero = Poly.one(p), Poly.zero(p)
    P_prev, P = one, zero
    Q_prev, Q = zero, one
    d = 0
    h = 0
    finite = not spec.is_periodic
    while True:
        if finite and h == len(spec.preperiod):
            # the value is P/Q exactly when the list is read as exact;
            # as a prefix it pins coefficients only up to 2*d_h
            if not exact and m > 2 * d:
                raise InsufficientQuotientsError(
                    f"{h} quotients determine {2 * d} coefficients, {m} requested")
            break
        A = spec.quotient(h + 1)
        if d + (d + A.deg) > m:
            break
        P_prev, P = P, A * P + P_prev
        Q_prev, Q = Q, A * Q + Q_prev
        d += A.deg
        h += 1
    return rational_digits(P.coeffs, Q.coeffs, p, m)


def cf_series(spec: CFSpec) -> LaurentSeries:
    """The series with continued fraction ``spec`` (exact rational if finite)."""
    if spec.is_periodic:
        return CFSeries(spec)
    P, Q = spec.convergent(len(spec.preperiod))
    return RationalSeries(P, Q)


def series_from_cf(spec: CFSpec, m: int, *, exact: bool = True) -> TruncatedSeries:
    """The first ``m`` fractional coefficients (plus the polynomial part).

    A finite spec is read as an exact rational by default; with
    ``exact=False`` it is the prefix of an unknown infinite expansion and
    only ``2*d_k`` coefficients are determined.
    """
    frac = _frac_digits_from_cf(spec, m, exact=exact)
    a0 = spec.a0
    if a0.is_zero:
        return TruncatedSeries(spec.p, 1, frac)
    head = list(reversed(a0.coeffs))
    return TruncatedSeries(spec.p, -a0.deg, head + frac)


# ---------------------------------------------------------------------------
# operations


def frac_part(L: LaurentSeries) -> LaurentSeries:
    if isinstance(L, RationalSeries):
        return RationalSeries(L.P % L.Q, L.Q)
    if L.start >= 1:
        return L
    if isinstance(L, CFSeries):
        s = L.spec
        return CFSeries(CFSpec(Poly.zero(s.p), s.preperiod, s.period))
    return FracPartSeries(L)


def poly_times_series(B: Poly, L: LaurentSeries) -> LaurentSeries:
    B = as_poly(B, L.p)
    if B.is_zero:
        return RationalSeries(Poly.zero(L.p), Poly.one(L.p))
    if B == Poly.one(L.p):
        return L
    if isinstance(L, RationalSeries):
        return RationalSeries(B * L.P, L.Q)
    return ProductSeries(B, L)


def sample_haar(p: int, M: int, seed: int) -> RandomSeries:
    """Haar-random series with the first ``M`` coefficients realized."""
    if M < 1:
        raise ValueError("M must be >= 1")
    L = RandomSeries(p, seed)
    L.coeffs(1, M + 1)
    return L


def haar_prefixes(p: int, M: int, count: int, seed: int, stream: int = 0) -> np.ndarray:
    """``count`` independent Haar prefixes ``a_1..a_M`` as rows of an array.

    Streams are keyed by ``(seed, stream + 1)`` and never collide with
    :class:`RandomSeries` streams.
    """
    bitgen = np.random.Philox(key=[seed % (1 << 64), stream + 1])
    return np.random.Generator(bitgen).integers(0, p, (count, M), dtype=np.int64)


# ---------------------------------------------------------------------------
# continued-fraction expansion


def _euclid_quotients(num: list, den: list, p: int, limit: Optional[int] = None) -> list[list]:
    """Quotients of the expansion of ``num/den`` with ``deg num < deg den``."""
    quots = []
    while _trimmed_len(num):
        q, r = _divmod_lists(den, num[:_trimmed_len(num)], p)
        quots.append(q)
        den, num = num[:_trimmed_len(num)], r
        if limit is not None and len(quots) >= limit:
            break
    return quots


def _trimmed_len(c: Sequence[int]) -> int:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return n


def prefix_quotients(prefix: Sequence[int], p: int) -> tuple[list[list], int, Optional[int]]:
    """Expand ``a_1..a_M`` and split off the certified quotients.

    Returns ``(quotients, certified, next_degree)`` where the first
    ``certified`` quotient coefficient lists agree with those of every
    series sharing the prefix and ``next_degree`` is the certified degree
    of the following quotient (or ``None``).
    """
    M = len(prefix)
    num = list(reversed(prefix))
    den = [0] * M + [1]
    quots = _euclid_quotients(num, den, p)
    d = 0
    certified = 0
    next_degree = None
    for q in quots:
        dq = len(q) - 1
        if 2 * (d + dq) <= M:
            certified += 1
            d += dq
            continue
        if d + (d + dq) <= M:
            next_degree = dq
        break
    return quots, certified, next_degree


@dataclass
class CFExpansion:
    """Certified continued-fraction data of a series.

    ``quotients`` holds ``A_1..A_h`` (all certified). ``exact`` marks a
    complete expansion of a rational series. ``next_degree`` is the
    certified degree of ``A_{h+1}`` when the prefix pins it down.
    """

    source: LaurentSeries
    a0: Poly
    quotients: list
    max_coeff: Optional[int] = None
    exact: bool = False
    next_degree: Optional[int] = None
    _P: list = field(default_factory=list, repr=False)
    _Q: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._P, self._Q = _convergents([self.a0] + list(self.quotients))

    @property
    def certified_count(self) -> int:
        return len(self.quotients)

    @property
    def degrees(self) -> list[int]:
        """``d_0, d_1, ..., d_h``."""
        out = [0]
        for A in self.quotients:
            out.append(out[-1] + A.deg)
        return out

    def d(self, h: int) -> int:
        """``d_h = deg Q_h``; ``h = certified_count + 1`` uses ``next_degree``."""
        degs = self.degrees
        if h < len(degs):
            return degs[h]
        if h == len(degs) and self.next_degree is not None:
            return degs[-1] + self.next_degree
        raise PrecisionExhaustedError(f"d_{h} is not certified")

    def convergent(self, h: int) -> tuple[Poly, Poly]:
        return convergent(self, h)


def convergent(cf: CFExpansion, h: int) -> tuple[Poly, Poly]:
    if not 0 <= h <= cf.certified_count:
        raise IndexError(f"convergent {h} beyond certified count {cf.certified_count}")
    return cf._P[h], cf._Q[h]


def cf_expand(L: LaurentSeries, max_coeff: int = 64) -> CFExpansion:
    """Continued fraction of ``L``: exhaustive for rational series, otherwise
    certified from the prefix ``a_1..a_max_coeff``."""
    p = L.p
    if isinstance(L, RationalSeries):
        if L.P.is_zero:
            raise ZeroSeriesError("continued fraction of the zero series")
        a0, rem = poly_divmod(L.P, L.Q)
        quots = _euclid_quotients(list(rem.coeffs), list(L.Q.coeffs), p)
        return CFExpansion(L, a0, [Poly._raw(_trim(q), p) for q in quots],
                           exact=True)
    if L.is_known_zero:
        raise ZeroSeriesError("continued fraction of the zero series")
    if max_coeff < 1:
        raise ValueError("max_coeff must be >= 1")
    M = max_coeff
    if L.available is not None:
        M = min(M, L.available - 1)
    prefix = L.coeffs(1, M + 1) if M >= 1 else []
    quots, certified, next_degree = prefix_quotients(prefix, p)
    return CFExpansion(L, L.polynomial_part(),
                       [Poly._raw(_trim(q), p) for q in quots[:certified]],
                       max_coeff=M, next_degree=next_degree)


def cf_certified(L: LaurentSeries, count: int, *, need_next_degree: bool = False,
                 start: int = 64, budget: int = 1 << 14) -> CFExpansion:
    """Grow the prefix until ``count`` quotients (and optionally the degree of
    the next one) are certified.

    Rational series are expanded exactly; asking for more quotients than a
    finite expansion has raises :class:`OutOfScopeError`.
    """
    if isinstance(L, RationalSeries):
        cf = cf_expand(L)
        if cf.certified_count < count + (1 if need_next_degree else 0):
            raise OutOfScopeError(
                f"rational series has only {cf.certified_count} partial quotients")
        return cf
    M = max(start, 4 * count + 8)
    while True:
        cf = cf_expand(L, M)
        ok = cf.certified_count > count or (
            cf.certified_count == count
            and (not need_next_degree or cf.next_degree is not None))
        if ok:
            return cf
        if cf.max_coeff is not None and cf.max_coeff < M:
            break  # finite backing ran out
        if M >= budget:
            break
        M = min(2 * M, budget)
    raise PrecisionExhaustedError(
        f"only {cf.certified_count} quotients certified from {cf.max_coeff} coefficients")


def K_of(L: LaurentSeries, horizon: int) -> int:
    """``max deg A_d`` over ``1 <= d <= horizon``; a lower bound for the sup."""
    if isinstance(L, RationalSeries):
        cf = cf_expand(L)
    else:
        cf = cf_certified(L, horizon)
    quots = cf.quotients[:horizon]
    return max((A.deg for A in quots), default=0)


def valuation(L: LaurentSeries, limit: int = 4096) -> Optional[int]:
    """``nu(L) = -w``; ``None`` if no nonzero coefficient below ``limit``."""
    w = L.valuation_index(limit)
    return None if w is None else -w


# ---------------------------------------------------------------------------
# text formats


def parse_cf_spec(body: str, p: int) -> CFSpec:
    """``"A1,A2,..."``, ``"A1,A2*"`` (periodic), ``"P1;A1,A2*"`` (preperiod)."""
    body = body.replace(" ", "")
    periodic = body.endswith("*")
    if periodic:
        body = body[:-1]
    pre_text, _, per_text = body.rpartition(";")
    pre = tuple(parse_poly(t, p) for t in pre_text.split(",") if t) if pre_text else ()
    items = tuple(parse_poly(t, p) for t in per_text.split(",") if t)
    if not items and not pre:
        raise ParseError("empty continued fraction")
    zero = Poly.zero(p)
    if periodic:
        return CFSpec(zero, pre, items)
    return CFSpec(zero, pre + items, ())


def format_cf_spec(spec: CFSpec) -> str:
    pre = ",".join(str(q) for q in spec.preperiod)
    if not spec.period:
        return f"[{spec.a0}; {pre}]"
    per = ",".join(str(q) for q in spec.period)
    return f"[{spec.a0}; {pre + ';' if pre else ''}{per}*]"


def parse_series(text: str, p: int) -> LaurentSeries:
    """``rational:P/Q``, ``cf:A1,A2,...[*]``, ``gap2`` or ``random:SEED``."""
    text = text.strip()
    kind, _, body = text.partition(":")
    kind = kind.lower()
    if kind == "gap2":
        if int(p) != 2:
            raise ParseError("gap2 is defined over F_2 only")
        return Gap2Series()
    if kind == "rational":
        num, sep, den = body.partition("/")
        if not sep:
            raise ParseError(f"expected rational:P/Q, got {text!r}")
        return RationalSeries(parse_poly(num, p), parse_poly(den, p))
    if kind == "cf":
        return cf_series(parse_cf_spec(body, p))
    if kind == "random":
        try:
            seed = int(body)
        except ValueError as exc:
            raise ParseError(f"bad seed in {text!r}") from exc
        return RandomSeries(p, seed)
    raise ParseError(f"unknown series spec {text!r}")
