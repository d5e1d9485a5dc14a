import random
from fractions import Fraction

import pytest
import sympy

from precalc.charclass import (
    TraceSeries,
    UniSeries,
    det_of_series,
    j_omega,
    j_series,
    modified_todd,
    newton_convert,
    q_series,
    q_tilde_series,
    sqrt_todd,
    todd,
)
from precalc.suite import matrix_oracle

X = sympy.Symbol("x")


def sympy_coeffs(expr, N):
    s = sympy.series(expr, X, 0, N + 1).removeO()
    return [Fraction(str(sympy.nsimplify(s.coeff(X, k)))) for k in range(N + 1)]


def test_q_series_values():
    assert q_series("standard", 2).c == [1, Fraction(1, 2), Fraction(1, 12)]
    assert q_series("reversed", 0).c == [-1]
    qt = q_tilde_series(2)
    assert qt.c[0] == 1 and qt.c[1] == 0


def test_series_against_sympy():
    N = 8
    assert q_series("standard", N).c == sympy_coeffs(X / (1 - sympy.exp(-X)), N)
    assert q_series("reversed", N).c == sympy_coeffs(X / (1 - sympy.exp(X)), N)
    qt = sympy_coeffs(X / (sympy.exp(X / 2) - sympy.exp(-X / 2)), N)
    assert q_tilde_series(N).c == qt
    assert all(c == 0 for c in qt[1::2])
    assert j_series(N).c == sympy_coeffs(sympy.sqrt(X / (sympy.exp(X / 2) - sympy.exp(-X / 2))), N)


def test_det_examples():
    N = 5
    assert det_of_series(UniSeries(N, [1]), 3, N) == TraceSeries.const(N, 1)
    tr_log = TraceSeries(N, {(k,): Fraction((-1) ** (k - 1), k) for k in range(1, N + 1)})
    for d in (1, 2, 4):
        assert det_of_series(UniSeries(N, [1, 1]), d, N) == tr_log.exp()
    with pytest.raises(ValueError):
        det_of_series(UniSeries(N, [2, 1]), 2, N)


def test_nilpotent_matrices():
    rng = random.Random(1)
    N = 6
    for _ in range(10):
        U = sympy.Matrix(4, 4, lambda i, j: rng.randint(-3, 3) if j > i else 0)
        for f in (q_series("standard", N), q_tilde_series(N), UniSeries(N, [1, 1]), q_series("reversed", N)):
            T = det_of_series(f, 4, N)
            vals = {k: Fraction(int((U ** k).trace())) for k in range(1, N + 1)}
            want = sympy.zeros(4, 4)
            for k, c in enumerate(f.c):
                want += sympy.Rational(c.numerator, c.denominator) * U ** k
            assert T.evaluate(vals) == Fraction(int(want.det()))


@pytest.mark.parametrize("size", [2, 3, 4])
def test_general_matrices_weight_by_weight(size):
    rng = random.Random(size)
    series = (q_series("standard", 4), q_tilde_series(4), j_series(4), UniSeries(4, [1, 1]))
    for _ in range(3):
        M = sympy.Matrix(size, size, lambda i, j: rng.randint(-2, 2))
        for f in series:
            assert all(x == 0 for x in matrix_oracle(f, M, 4))


def test_todd_identities():
    for N in range(7):
        half = TraceSeries.gen(N, 1).scale(Fraction(-1, 2)).exp()
        for d in (1, 2, 3):
            j = j_omega(d, N)
            assert j * j == modified_todd(d, N)
            assert todd(d, N) * half == modified_todd(d, N)
    # the reversed convention breaks the shift identity
    N = 4
    half = TraceSeries.gen(N, 1).scale(Fraction(-1, 2)).exp()
    assert todd(2, N, "reversed") * half != modified_todd(2, N)


def test_modified_todd_rank_one():
    assert modified_todd(1, 4) == det_of_series(q_tilde_series(4), 1, 4)
    assert modified_todd(1, 4).homogeneous(1).table == {}


def test_sqrt_todd():
    for d in (1, 2, 3):
        s = sqrt_todd(d, 5)
        assert s * s == todd(d, 5)
    with pytest.raises(ValueError):
        sqrt_todd(1, 3, "reversed")
    r = sqrt_todd(2, 3, "reversed")
    assert r * r == todd(2, 3, "reversed")


def test_newton():
    N = 6
    p1 = TraceSeries.gen(N, 1)
    p2 = TraceSeries.gen(N, 2)
    assert newton_convert(TraceSeries.gen(N, 1, "elementary"), "power") == p1
    assert newton_convert(TraceSeries.gen(N, 2, "elementary"), "power") == (p1 * p1 - p2).scale(Fraction(1, 2))
    T = todd(3, N)
    assert newton_convert(newton_convert(T, "elementary"), "power") == T


def test_second_elementary_trace_brute_force():
    rng = random.Random(2)
    a2 = newton_convert(TraceSeries.gen(2, 2, "elementary"), "power")
    for _ in range(10):
        M = sympy.Matrix(3, 3, lambda i, j: rng.randint(-3, 3))
        minors = sum(M.extract([i, j], [i, j]).det() for i in range(3) for j in range(i + 1, 3))
        vals = {1: Fraction(int(M.trace())), 2: Fraction(int((M * M).trace()))}
        assert a2.evaluate(vals) == Fraction(int(minors))


def test_multiplicative():
    N = 5
    f, g = q_series("standard", N), UniSeries(N, [1, 2, -1, 3])
    for d in (1, 3):
        assert det_of_series(f * g, d, N) == det_of_series(f, d, N) * det_of_series(g, d, N)
