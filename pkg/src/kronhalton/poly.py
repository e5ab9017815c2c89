"""Arithmetic in F_p and F_p[X].

Polynomials are immutable, stored little-endian (``coeffs[i]`` is the
coefficient of ``X**i``) with residues in ``0..p-1`` and no trailing zeros.
The zero polynomial has an empty coefficient tuple and degree
:data:`NEG_INF`, a sentinel that orders below every integer but refuses
arithmetic.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import DegreeError, FieldMismatchError, InvalidBaseError, ParseError

MAX_CHAR = 1 << 16


class _NegInf:
    """Degree of the zero polynomial."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("deg(0)")

    def __repr__(self):
        return "NEG_INF"


NEG_INF = _NegInf()


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldChar(int):
    """A validated prime characteristic ``2 <= p < 2**16``."""

    def __new__(cls, p: int) -> "FieldChar":
        if isinstance(p, FieldChar):
            return p
        p = int(p)
        if not 2 <= p < MAX_CHAR or not is_prime(p):
            raise ValueError(f"characteristic must be a prime below 2^16, got {p}")
        return super().__new__(cls, p)

    def inv(self, a: int) -> int:
        a %= self
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, -1, int(self))


PolyLike = Union["Poly", int, Sequence[int]]


def _trim(c: list) -> tuple:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    __slots__ = ("p", "coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int], p: int):
        self.p = FieldChar(p)
        self.coeffs = _trim([int(c) % self.p for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple, p: FieldChar) -> "Poly":
        # trusted constructor: coeffs already reduced and trimmed
        obj = cls.__new__(cls)
        obj.p = p
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, p: int) -> "Poly":
        return cls._raw((), FieldChar(p))

    @classmethod
    def one(cls, p: int) -> "Poly":
        return cls._raw((1,), FieldChar(p))

    @classmethod
    def x(cls, p: int, k: int = 1) -> "Poly":
        """The monomial ``X**k``."""
        return cls._raw((0,) * k + (1,), FieldChar(p))

    @classmethod
    def constant(cls, c: int, p: int) -> "Poly":
        return cls([c], p)

    # -- basic properties ------------------------------------------------
    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_monic(self) -> bool:
        return self.lc == 1

    def monic(self) -> "Poly":
        if not self.coeffs or self.lc == 1:
            return self
        inv = self.p.inv(self.lc)
        return Poly._raw(tuple(c * inv % self.p for c in self.coeffs), self.p)

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.p != self.p:
                raise FieldMismatchError(f"F_{self.p} vs F_{other.p}")
            return other
        if isinstance(other, int):
            return Poly([other], self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return Poly._raw(_trim(out), p)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Poly._raw(tuple((p - c) % p for c in self.coeffs), p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw((), self.p)
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly._raw(_trim([c % p for c in out]), p)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.one(self.p)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        return poly_divmod(self, self._coerce(other))

    def __floordiv__(self, other):
        return poly_divmod(self, self._coerce(other))[0]

    def __mod__(self, other):
        return poly_divmod(self, self._coerce(other))[1]

    def shift(self, k: int) -> "Poly":
        """Multiply by ``X**k`` (``k >= 0``)."""
        if not self.coeffs or k == 0:
            return self
        return Poly._raw((0,) * k + self.coeffs, self.p)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == Poly([other], self.p).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((int(self.p), self.coeffs))
        return self._hash

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, p={int(self.p)})"

    def __str__(self):
        return format_poly(self)


# ---------------------------------------------------------------------------
# operations


def int_to_poly(n: int, p: int) -> Poly:
    """Read the base-``p`` digits of ``n`` as polynomial coefficients."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = FieldChar(p)
    digits = []
    while n:
        n, r = divmod(n, p)
        digits.append(r)
    return Poly._raw(tuple(digits), p)


def poly_eval_int(a: Poly, at: int) -> int:
    """Evaluate with coefficients read as integers, e.g. ``a(p)``."""
    total = 0
    for c in reversed(a.coeffs):
        total = total * at + c
    return total


def _divmod_lists(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list, list]:
    if len(a) < len(b):
        return [], list(a)
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if c:
            c = c * inv % p
            q[k - db] = c
            off = k - db
            for j in range(db):
                r[off + j] = (r[off + j] - c * b[j]) % p
        r[k] = 0
    del r[db:]
    return q, r


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if a.p != b.p:
        raise FieldMismatchError(f"F_{a.p} vs F_{b.p}")
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    q, r = _divmod_lists(a.coeffs, b.coeffs, a.p)
    return Poly._raw(_trim(q), a.p), Poly._raw(_trim(r), a.p)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd."""
    if a.p != b.p:
        raise FieldMismatchError(f"F_{a.p} vs F_{b.p}")
    if a.is_zero and b.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero:
        a, b = b, poly_divmod(a, b)[1]
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    p = a.p
    r0, r1 = a, b
    s0, s1 = Poly.one(p), Poly.zero(p)
    t0, t1 = Poly.zero(p), Poly.one(p)
    while not r1.is_zero:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    k = p.inv(r0.lc)
    return r0 * k, s0 * k, t0 * k


def check_base(b: Poly) -> None:
    if b.is_zero or b.deg < 1:
        raise InvalidBaseError(f"base must be nonconstant, got {b}")
    if not b.is_monic():
        raise InvalidBaseError(f"base must be monic, got {b}")


def base_digits(n: Poly, b: Poly) -> list[Poly]:
    """Digits ``a_0, a_1, ...`` of ``n = sum a_i b**i`` with ``deg a_i < deg b``."""
    check_base(b)
    if n.p != b.p:
        raise FieldMismatchError(f"F_{n.p} vs F_{b.p}")
    p, bc = n.p, b.coeffs
    digits = []
    rest = list(n.coeffs)
    while rest:
        rest, r = _divmod_lists(rest, bc, p)
        rest = _trim(rest)
        digits.append(Poly._raw(_trim(r), p))
    return digits


def check_pairwise_coprime(bases: Sequence[Poly]) -> None:
    from .errors import CoprimalityError

    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            g = poly_gcd(bases[i], bases[j])
            if g.deg != 0:
                raise CoprimalityError(
                    f"bases {bases[i]} and {bases[j]} share the factor {g}")


def require_degree_below(r: Poly, e: int, what: str = "polynomial") -> None:
    if not r.is_zero and r.deg >= e:
        raise DegreeError(f"{what} {r} must have degree < {e}")


# ---------------------------------------------------------------------------
# text format

_TERM = re.compile(r"^(\d*)\*?(?:([Xx])(?:\^(\d+))?)?$")


def parse_poly(text: str, p: int) -> Poly:
    """Parse ``"X^2+X+1"`` (symbolic) or ``"1,1,1"`` (little-endian list)."""
    p = FieldChar(p)
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    if "," in s:
        try:
            return Poly([int(c) for c in s.split(",")], p)
        except ValueError as exc:
            raise ParseError(f"bad coefficient list {text!r}") from exc
    out: dict[int, int] = {}
    for sign, term in re.findall(r"([+-]?)([^+-]+)", s):
        m = _TERM.match(term)
        if not m or (not m.group(1) and not m.group(2)):
            raise ParseError(f"bad polynomial term {term!r} in {text!r}")
        coef = int(m.group(1)) if m.group(1) else 1
        exp = (int(m.group(3)) if m.group(3) else 1) if m.group(2) else 0
        if sign == "-":
            coef = -coef
        out[exp] = out.get(exp, 0) + coef
    if re.sub(r"[+-]?[^+-]+", "", s):
        raise ParseError(f"cannot parse {text!r}")
    size = max(out) + 1
    coeffs = [0] * size
    for e, c in out.items():
        coeffs[e] = c
    return Poly(coeffs, p)


def format_poly(a: Poly) -> str:
    if a.is_zero:
        return "0"
    terms = []
    for i in range(len(a.coeffs) - 1, -1, -1):
        c = a.coeffs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
            continue
        mono = "X" if i == 1 else f"X^{i}"
        terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms)


def as_poly(value: PolyLike, p: int) -> Poly:
    if isinstance(value, Poly):
        if value.p != p:
            raise FieldMismatchError(f"F_{value.p} vs F_{p}")
        return value
    if isinstance(value, str):
        return parse_poly(value, p)
    if isinstance(value, int):
        return Poly([value], p)
    return Poly(value, p)
