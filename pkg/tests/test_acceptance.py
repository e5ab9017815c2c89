"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test records a ``PASS``/``FAIL`` line in ``RESULTS`` (printed by
``conftest.py`` at the end of the session) and prints it immediately.
"""

import random
import time
from fractions import Fraction

import numpy as np

from kronhalton import theorems as th
from kronhalton.laurent import Gap2Series, cf_expand
from kronhalton.poly import Poly, parse_poly
from kronhalton.quality import is_net
from kronhalton.sequences import (
    HybridSpec,
    generate,
    halton_matrix,
    halton_point,
    residue_block_indices,
)

import oracles

RESULTS: dict[int, str] = {}


def P(text, p=2):
    return parse_poly(text, p)


class Criterion:
    """Times the body and records the verdict against the budget."""

    def __init__(self, number: int, title: str, budget: float):
        self.number, self.title, self.budget = number, title, budget
        self.details: list[str] = []
        self.ok = True

    def check(self, cond: bool, what: str) -> None:
        if not cond:
            self.ok = False
            self.details.append(what)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is not None:
            self.ok = False
            self.details.append(f"{exc_type.__name__}: {exc}")
        in_time = elapsed < self.budget
        verdict = "PASS" if self.ok and in_time else "FAIL"
        note = "" if in_time else f" over budget {self.budget:g}s"
        extra = f" [{'; '.join(self.details)}]" if self.details else ""
        line = f"{verdict} criterion {self.number}: {self.title} ({elapsed:.2f}s){note}{extra}"
        RESULTS[self.number] = line
        print(line)
        if exc_type is None:
            assert self.ok and in_time, line
        return False


def test_criterion_01_van_der_corput():
    with Criterion(1, "Halton base X equals the base-2 radical inverse, n < 2^12", 1.0) as c:
        X = [P("X")]
        bad = [n for n in range(1 << 12)
               if halton_point(n, X, 12).coord(0) != oracles.radical_inverse(n, 2, 12)]
        c.check(not bad, f"mismatch at n={bad[:5]}")


def test_criterion_02_pascal():
    with Criterion(2, "base X+1 gives the Pascal matrix; 2^10 points match", 5.0) as c:
        for m in range(1, 17):
            c.check(halton_matrix(P("X+1"), m, m).tolist() == oracles.pascal_mod(m, 2),
                    f"matrix differs at m={m}")
        pts = generate(HybridSpec(bases=(P("X"), P("X+1"))), 1 << 10, precision=10)
        pascal = oracles.pascal_mod(10, 2)
        for n in range(1 << 10):
            pt = pts[n]
            c.check(pt.coord(0) == oracles.radical_inverse(n, 2, 10), f"first coordinate n={n}")
            c.check(pt.coord(1) == oracles.digital_point(pascal, n, 2), f"second coordinate n={n}")


def test_criterion_03_gap_series_bundle():
    with Criterion(3, "gap series continued fraction, identity, t <= 1 and nets", 30.0) as c:
        cf = cf_expand(Gap2Series(), 64)
        X, X2 = Poly.x(2), Poly.x(2, 2)
        c.check(cf.certified_count >= 10, f"only {cf.certified_count} certified")
        c.check(all(A == (X if h % 2 == 0 else X2) for h, A in enumerate(cf.quotients)),
                "quotients do not alternate")
        c.check(th.gap2_identity_residual(64) == [], "L^2 + X^2 L + X does not vanish")
        prop1 = th.prop1_check(Gap2Series(), Poly.one(2), m_max=12)
        c.check(prop1.summary["t_claim"] <= 1 and prop1.passed, "t-value check failed")
        pts = generate(HybridSpec(series=(Gap2Series(),)), 1 << 12, precision=12)
        for m in range(1, 13):
            c.check(is_net(pts[: 1 << m], min(1, m), m).passed, f"not a (1,{m},1)-net")


def test_criterion_04_multiplied_series():
    with Criterion(4, "T(m) <= K + deg B - 1 for B in X, X+1, X^2+X+1", 60.0) as c:
        for B in ("X", "X+1", "X^2+X+1"):
            report = th.prop1_check(Gap2Series(), P(B), m_max=12, net_max=12)
            c.check(report.passed, f"B={B} failed")
            c.check(report.summary["t_claim"] == 1 + P(B).deg, f"B={B} claim")
            c.check(all("net_ok" in row for row in report.rows), f"B={B} missing counting")


def test_criterion_05_empty_interval():
    with Criterion(5, "empty interval for n = 1, 2, 3", 60.0) as c:
        sizes = {1: 8, 2: 512, 3: 2_097_152}
        for n, N in sizes.items():
            w = th.thm3_witness(n)
            c.check(w.N == N, f"n={n} N={w.N}")
            c.check(w.count == 0, f"n={n} count={w.count}")
            c.check(w.exponent_identity, f"n={n} exponent identity")
            c.check(2 * w.lower_bound ** 2 == w.N, f"n={n} bound is not sqrt(N/2)")


# N * D*_N of the gap-series / base-X hybrid at the default precision,
# pinned after the first verified run
ND_PINNED = {
    16: Fraction(5132197, 2097152),
    32: Fraction(4083621, 1048576),
    64: Fraction(6590217, 1048576),
    128: Fraction(10308501, 1048576),
    256: Fraction(28095885, 2097152),
    512: Fraction(39156891, 2097152),
    1024: Fraction(4439183, 1048576),
    2048: Fraction(15800115, 2097152),
    4096: Fraction(27815773, 2097152),
}


def test_criterion_06_discrepancy_scaling():
    with Criterion(6, "N D*_N / (sqrt(N) log^2 N) bounded by the frozen constant", 600.0) as c:
        const = th.THM2_CONSTANT[(2, 1)]
        report = th.thm2_scaling(Gap2Series(), [P("X")], sorted(ND_PINNED), constant=const)
        for row in report.rows:
            c.check(row["ND"] == ND_PINNED[row["N"]], f"N={row['N']} ND={row['ND']}")
            c.check(Fraction(row["ratio"]) <= const, f"N={row['N']} ratio={row['ratio']:.4f}")
        c.check(not report.summary["growth_flag"], "ratio grows")
        c.check(report.passed, "report failed")


def test_criterion_07_fair_counts():
    with Criterion(7, "fair counts for d <= 4, l <= 3, K < 8", 60.0) as c:
        spec = HybridSpec(series=(Gap2Series(),), bases=(P("X"),))
        report = th.thm1_grid(spec, dmax=4, lmax=3, Ks=8)
        c.check(report.passed, f"{report.summary['failures']} unfair cells")
        c.check(len(report.rows) == 20, "grid incomplete")


def _brute_block(K, u, B, R, p):
    """Filter the block by reducing every index with a table of
    ``X^k mod B`` (linear in the digits of ``n``)."""
    e = B.deg
    size = p ** (u + e)
    lo = K * size
    width = len(np.base_repr(lo + size - 1, p)) if lo + size > 1 else 1
    table = []
    r = Poly.one(p)
    for _ in range(width):
        table.append(list((r % B).coeffs) + [0] * (e - len((r % B).coeffs)))
        r = r.shift(1)
    table = np.array(table, dtype=np.int64).reshape(width, e)
    idx = np.arange(lo, lo + size, dtype=np.int64)
    digits = np.stack([(idx // p ** k) % p for k in range(width)], axis=1)
    residues = digits @ table % p
    target = np.array(list(R.coeffs) + [0] * (e - len(R.coeffs)), dtype=np.int64)
    return idx[(residues == target).all(axis=1)].tolist()


def test_criterion_08_residue_blocks():
    with Criterion(8, "residue blocks equal brute-force filtering, 100 cases", 5.0) as c:
        rng = random.Random(8)
        for case in range(100):
            p = rng.choice([2, 3])
            e = rng.randint(1, 3)
            B = Poly([rng.randrange(p) for _ in range(e)] + [1], p)
            R = Poly([rng.randrange(p) for _ in range(e)], p)
            u, K = rng.randint(0, 6), rng.randint(0, 4)
            got, _ = residue_block_indices(K, u, B, R)
            c.check(got == _brute_block(K, u, B, R, p), f"case {case}: p={p} B={B} R={R} u={u} K={K}")
            c.check(len(got) == p ** u, f"case {case}: size")


def test_criterion_09_hankel_rank_and_shifted_blocks():
    with Criterion(9, "200 random series: full row rank and shifted-block bound", 60.0) as c:
        report = th.random_lemma56(count=200, ps=(2, 3), m5=16, m6=10, seed=7)
        c.check(report.summary["lemma5_pass"] == 200, f"rank {report.summary['lemma5_pass']}/200")
        c.check(report.summary["lemma6_pass"] == 200, f"blocks {report.summary['lemma6_pass']}/200")


def test_criterion_10_haar_statistics():
    with Criterion(10, "cylinder frequencies |z| < 3 and chi-square at 99%", 60.0) as c:
        cylinders = [(("X",), 2), (("X", "X"), 2), (("X",), 3), (("X^2+X", "X+1"), 2)]
        for qs, p in cylinders:
            rep = th.lemma3_mc(th.CylinderSpec(tuple(P(q, p) for q in qs)), samples=100_000)
            z = rep.summary["z"]
            c.check(abs(z) < 3, f"cylinder {qs} p={p} z={z:.2f}")
            c.check(rep.summary["uncertifiable"] == 0, f"cylinder {qs} undecided samples")
        for B in ("X", "X+1", "X^2+X+1"):
            rep = th.lemma4_mc(P(B), samples=100_000, r=3)
            c.check(rep.passed, f"B={B} chi2={rep.summary['chi2']:.2f}")
