import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kronhalton.errors import (
    CoprimalityError,
    DegreeError,
    FieldMismatchError,
    InvalidBaseError,
    ParseError,
)
from kronhalton.laurent import Gap2Series, RandomSeries, RationalSeries, frac_part, poly_times_series
from kronhalton.poly import Poly, int_to_poly, parse_poly, poly_divmod
from kronhalton.sequences import (
    GeneratingMatrix,
    HybridSpec,
    PointSet,
    default_precision,
    generate,
    halton_matrix,
    halton_point,
    hybrid_point,
    iter_chunks,
    kronecker_matrix,
    kronecker_point,
    points_to_csv,
    read_points_csv,
    residue_block_indices,
    shifted_kronecker_block,
)

import oracles


def P(text, p=2):
    return parse_poly(text, p)


class TestHalton:
    def test_van_der_corput_examples(self):
        assert halton_point(3, [P("X")], 4).coord(0) == Fraction(3, 4)
        assert halton_point(6, [P("X")], 4).coord(0) == Fraction(3, 8)

    def test_two_bases(self):
        assert halton_point(2, [P("X"), P("X+1")], 4).coords() == (Fraction(1, 4), Fraction(3, 4))

    def test_base_x_is_radical_inverse(self):
        for p in (2, 3, 5):
            for n in range(200):
                got = halton_point(n, [P("X", p)], 8).coord(0)
                assert got == oracles.radical_inverse(n, p, 8)

    def test_precision_rounded_up(self):
        pt = halton_point(5, [P("X^2+X+1"), P("X^3+X+1")], 7)
        assert pt.precision == 12

    def test_invalid_bases(self):
        with pytest.raises(InvalidBaseError):
            halton_point(1, [P("1")], 4)
        with pytest.raises(InvalidBaseError):
            halton_point(1, [P("2X", 3)], 4)
        with pytest.raises(CoprimalityError):
            halton_point(1, [P("X"), P("X^2+X")], 4)
        with pytest.raises(FieldMismatchError):
            halton_point(1, [P("X"), P("X", 3)], 4)

    def test_pascal_matrix_for_base_x_plus_one(self):
        for m in (1, 5, 16):
            assert halton_matrix(P("X+1"), m, m).tolist() == oracles.pascal_mod(m, 2)

    @given(st.integers(0, 2 ** 12 - 1))
    def test_matrix_route_matches_digits(self, n):
        bases = [P("X+1"), P("X^2+X+1")]
        pt = halton_point(n, bases, 12)
        for j, b in enumerate(bases):
            C = halton_matrix(b, 12, 12).tolist()
            assert pt.coord(j) == oracles.digital_point(C, n, 2)

    @pytest.mark.parametrize("bases,p", [(["X", "X+1"], 2), (["X^2+X+1", "X"], 2), (["X+1", "X+2"], 3)])
    def test_membership_congruence(self, bases, p):
        bs = [P(b, p) for b in bases]
        es = [b.deg for b in bs]
        cap = 10 if p == 2 else 6
        ds_options = [(1, 1), (2, 1), (1, 2)]
        m = 12
        pts = [halton_point(n, bs, m) for n in range(p ** cap)]
        for ds in ds_options:
            mod = Poly.one(p)
            for b, d in zip(bs, ds):
                mod = mod * b ** d
            for target in range(0, p ** cap, max(1, p ** cap // 17)):
                R = poly_divmod(int_to_poly(target, p), mod)[1]
                ref = pts[target]
                for n in range(p ** cap):
                    same_box = all(
                        pts[n].digits[j][: es[j] * ds[j]] == ref.digits[j][: es[j] * ds[j]]
                        for j in range(len(bs))
                    )
                    congruent = poly_divmod(int_to_poly(n, p), mod)[1] == R
                    assert same_box == congruent


class TestKronecker:
    def test_matrix_examples(self):
        M = kronecker_matrix(RationalSeries(P("1"), P("X")), 3)
        expect = np.zeros((3, 3), dtype=int)
        expect[0, 0] = 1
        assert (M == expect).all()
        assert kronecker_matrix(Gap2Series(), 4).tolist() == [
            [1, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]
        assert kronecker_matrix(RationalSeries(P("1"), P("X+1")), 2).tolist() == [[1, 1], [1, 1]]

    def test_point_examples(self):
        L = RationalSeries(P("1"), P("X"))
        assert kronecker_point(3, L, 4).coord(0) == Fraction(1, 2)
        assert kronecker_point(2, L, 4).coord(0) == 0
        assert kronecker_point(1, Gap2Series(), 4).digits[0] == (1, 0, 0, 1)

    def test_generating_matrix_oracle(self):
        G = GeneratingMatrix.kronecker(Gap2Series())
        assert G.entry(1, 0) == 1 and G.entry(2, 2) == 1 and G.entry(2, 1) == 0
        A = GeneratingMatrix.from_array(2, np.eye(3, dtype=int))
        assert A.truncate(2, 2).tolist() == [[1, 0], [0, 1]]
        with pytest.raises(ValueError):
            A.truncate(4, 4)

    @settings(max_examples=40)
    @given(st.integers(0, 2 ** 32), st.sampled_from([2, 3]), st.integers(1, 24), st.data())
    def test_series_route_equals_matrix_route(self, seed, p, m, data):
        L = RandomSeries(p, seed)
        n = data.draw(st.integers(0, p ** 12 - 1))
        C = kronecker_matrix(L, max(m, 12))[:m, :12].tolist()
        assert kronecker_point(n, L, m).coord(0) == oracles.digital_point(C, n, p)

    def test_shifted_block(self):
        L, V = RandomSeries(3, 1), RandomSeries(3, 2)
        block = shifted_kronecker_block(L, 3, 10, shift=V)
        assert len(block) == 27
        for n in (0, 5, 26):
            assert block[n].digits == kronecker_point(n, L, 10, shift=V).digits
        # k -> leading digits of {kL} is a bijection when the 3x3 Hankel block is invertible
        from kronhalton.quality import rank_fp
        if rank_fp(kronecker_matrix(L, 3), 3) == 3:
            assert len(set(block.prefix_values(0, 3).tolist())) == 27


class TestHybrid:
    def spec(self):
        return HybridSpec(series=(Gap2Series(),), bases=(P("X"),))

    def test_examples(self):
        spec = self.spec()
        assert hybrid_point(0, spec, 6).coords() == (0, 0)
        pt = hybrid_point(1, spec, 6)
        assert pt.digits[0] == (1, 0, 0, 1, 0, 0)
        assert pt.coord(1) == Fraction(1, 2)
        pt = hybrid_point(2, spec, 6)
        shifted = frac_part(poly_times_series(P("X"), Gap2Series())).frac_coeffs(6)
        assert list(pt.digits[0]) == shifted == [0, 0, 1, 0, 0, 0]
        assert pt.coord(1) == Fraction(1, 4)

    def test_batch_matches_single_points(self):
        spec = HybridSpec(series=(Gap2Series(), RandomSeries(2, 4)), bases=(P("X+1"), P("X^2+X+1")))
        pts = generate(spec, 300, start=17)
        m = pts.precision
        assert m % 2 == 0
        for i in (0, 1, 150, 299):
            assert pts[i].digits == hybrid_point(17 + i, spec, m).digits

    def test_chunks_concatenate(self):
        spec = self.spec()
        whole = generate(spec, 100, precision=12)
        parts = list(iter_chunks(spec, 0, 100, 12, chunk=32))
        assert [len(c) for c in parts] == [32, 32, 32, 4]
        assert np.array_equal(np.concatenate([c.digits for c in parts]), whole.digits)

    def test_default_precision(self):
        assert default_precision(1024, 2) == 30
        assert self.spec().resolve_precision(1024) == 30

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            HybridSpec()
        with pytest.raises(FieldMismatchError):
            HybridSpec(series=(Gap2Series(),), bases=(P("X", 3),))


class TestResidueBlocks:
    def test_examples(self):
        assert residue_block_indices(0, 2, P("X"), Poly.zero(2)) == ([0, 2, 4, 6], Poly.zero(2))
        idx, _ = residue_block_indices(0, 1, P("X+1"), P("1"))
        assert idx == [1, 2]

    @settings(max_examples=60)
    @given(st.sampled_from([2, 3]), st.integers(0, 3), st.integers(0, 20), st.data())
    def test_matches_filtering(self, p, u, K, data):
        e = data.draw(st.integers(1, 2))
        tail = data.draw(st.lists(st.integers(0, p - 1), min_size=e, max_size=e))
        B = Poly(tail + [1], p)
        R = Poly(data.draw(st.lists(st.integers(0, p - 1), min_size=0, max_size=e)), p)
        idx, C = residue_block_indices(K, u, B, R)
        lo, hi = K * p ** (u + e), (K + 1) * p ** (u + e)
        expect = [n for n in range(lo, hi) if poly_divmod(int_to_poly(n, p), B)[1] == R]
        assert idx == expect
        assert len(idx) == p ** u
        for n in idx:
            k = poly_divmod(int_to_poly(n, p) - R, B)[0]
            assert poly_divmod(k, Poly.x(p, u))[0] == C

    def test_errors(self):
        with pytest.raises(DegreeError):
            residue_block_indices(0, 1, P("X"), P("X"))
        with pytest.raises(InvalidBaseError):
            residue_block_indices(0, 1, P("2X", 3), Poly.zero(3))


class TestCSV:
    def test_round_trip(self):
        spec = HybridSpec(series=(Gap2Series(),), bases=(P("X"),))
        pts = generate(spec, 40, start=3, precision=10)
        text = points_to_csv(pts, "demo")
        back, meta = read_points_csv(io.StringIO(text))
        assert back == pts
        assert meta["spec"] == "demo" and meta["p"] == 2 and meta["precision"] == 10
        assert points_to_csv(back, "demo") == text

    def test_vdc_rows(self):
        spec = HybridSpec(bases=(P("X"),))
        pts = generate(spec, 4, precision=3)
        lines = points_to_csv(pts, spec.describe()).splitlines()
        assert lines[:3] == ["# p=2", "# spec=halton:X", "# precision=3"]
        assert lines[3:] == ["0, 000, 0.0", "1, 100, 0.5", "2, 010, 0.25", "3, 110, 0.75"]

    @pytest.mark.parametrize("text", [
        "",
        "# p=2\n# precision=3\n",
        "# p=2\n0, 000, 0.0\n",
        "# p=2\n# precision=3\n0, 00, 0.0\n",
        "# p=2\n# precision=3\n0, 000, 0.0\n1, 100, 0.5, 000\n",
        "# p=2\n# precision=3\n0, 020, 0.0\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            read_points_csv(io.StringIO(text))

    def test_empty_pointset(self):
        e = PointSet.empty(2, 2, 5)
        assert len(e) == 0 and e.dim == 2 and e.precision == 5
