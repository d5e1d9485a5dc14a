"""Todd-type characteristic series as polynomials in the trace symbols p_k = Tr(A^k).

Determinants of series are computed as det f(A) = f(0)^d exp(Tr log(f(A)/f(0))).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .scalar import as_rational

CONVENTIONS = ("standard", "reversed")


class UniSeries:
    """Truncated power series c_0 + c_1 x + ... + c_N x^N."""

    __slots__ = ("N", "c")

    def __init__(self, N: int, coeffs: Sequence):
        if N < 0:
            raise ValueError("truncation must be non-negative")
        c = [as_rational(x) for x in list(coeffs)[: N + 1]]
        self.N = N
        self.c = c + [Fraction(0)] * (N + 1 - len(c))

    @classmethod
    def x(cls, N: int) -> "UniSeries":
        return cls(N, [0, 1])

    def __add__(self, other):
        n = min(self.N, other.N)
        return UniSeries(n, [a + b for a, b in zip(self.c, other.c)])

    def __neg__(self):
        return UniSeries(self.N, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "UniSeries":
        s = as_rational(s)
        return UniSeries(self.N, [a * s for a in self.c])

    def __mul__(self, other):
        n = min(self.N, other.N)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.c[: n + 1]):
            if a:
                for j in range(n + 1 - i):
                    out[i + j] += a * other.c[j]
        return UniSeries(n, out)

    def inverse(self) -> "UniSeries":
        if not self.c[0]:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        out = [Fraction(0)] * (self.N + 1)
        out[0] = 1 / self.c[0]
        for n in range(1, self.N + 1):
            s = sum(self.c[k] * out[n - k] for k in range(1, n + 1))
            out[n] = -s / self.c[0]
        return UniSeries(self.N, out)

    def __truediv__(self, other):
        return self * other.inverse()

    def log(self) -> "UniSeries":
        """log of a series with constant term 1."""
        if self.c[0] != 1:
            raise ValueError("log needs constant term 1")
        # (log f)' = f'/f
        f = self
        df = UniSeries(self.N, [k * self.c[k] for k in range(1, self.N + 1)])
        q = df * f.inverse()
        return UniSeries(self.N, [0] + [q.c[k - 1] / k for k in range(1, self.N + 1)])

    def exp(self) -> "UniSeries":
        if self.c[0]:
            raise ValueError("exp needs zero constant term")
        out = [Fraction(0)] * (self.N + 1)
        out[0] = Fraction(1)
        # f = exp(g): n f_n = sum k g_k f_{n-k}
        for n in range(1, self.N + 1):
            out[n] = sum(k * self.c[k] * out[n - k] for k in range(1, n + 1)) / n
        return UniSeries(self.N, out)

    def sqrt(self) -> "UniSeries":
        if self.c[0] != 1:
            raise ValueError("square root needs constant term 1")
        return self.log().scale(Fraction(1, 2)).exp()

    def __eq__(self, other):
        return isinstance(other, UniSeries) and self.N == other.N and self.c == other.c

    def __repr__(self):
        return f"UniSeries({[str(a) for a in self.c]})"


def _exp_over_x(N: int, t) -> UniSeries:
    """(e^{tx} - 1)/x truncated at N."""
    t = as_rational(t)
    return UniSeries(N, [t ** (n + 1) / factorial(n + 1) for n in range(N + 1)])


def q_series(convention: str, N: int) -> UniSeries:
    """x/(1 - e^{-x}) (standard) or x/(1 - e^{x}) (reversed)."""
    if convention == "standard":
        return _exp_over_x(N, -1).scale(-1).inverse()
    if convention == "reversed":
        return _exp_over_x(N, 1).scale(-1).inverse()
    raise ValueError(f"unknown convention {convention!r}")


def q_tilde_series(N: int) -> UniSeries:
    """x/(e^{x/2} - e^{-x/2})."""
    return (_exp_over_x(N, Fraction(1, 2)) - _exp_over_x(N, Fraction(-1, 2))).inverse()


def j_series(N: int) -> UniSeries:
    return q_tilde_series(N).sqrt()


class TraceSeries:
    """Polynomial in p_1, p_2, ... (or a_1, a_2, ...) truncated at total weight N.

    Keys are sorted tuples of indices; (1, 1, 2) stands for p_1^2 p_2."""

    __slots__ = ("N", "table", "basis")

    def __init__(self, N: int, table: Mapping[tuple, object] | None = None, basis: str = "power"):
        self.N = N
        self.basis = basis
        t = {}
        for k, v in (table or {}).items():
            k = tuple(sorted(k))
            if any(i < 1 for i in k):
                raise ValueError("trace indices start at 1")
            if sum(k) > N:
                continue
            v = as_rational(v)
            if v:
                t[k] = t.get(k, 0) + v
        self.table = {k: v for k, v in t.items() if v}

    @classmethod
    def const(cls, N: int, c, basis: str = "power") -> "TraceSeries":
        return cls(N, {(): c}, basis)

    @classmethod
    def gen(cls, N: int, k: int, basis: str = "power") -> "TraceSeries":
        return cls(N, {(k,): 1}, basis)

    def _check(self, other):
        if self.basis != other.basis:
            raise ValueError("mixing power-sum and elementary symbols")

    def constant(self) -> Fraction:
        return self.table.get((), Fraction(0))

    def __add__(self, other):
        self._check(other)
        t = dict(self.table)
        for k, v in other.table.items():
            t[k] = t.get(k, 0) + v
        return TraceSeries(min(self.N, other.N), t, self.basis)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TraceSeries":
        c = as_rational(c)
        return TraceSeries(self.N, {k: v * c for k, v in self.table.items()}, self.basis)

    def __mul__(self, other):
        if not isinstance(other, TraceSeries):
            return self.scale(other)
        self._check(other)
        n = min(self.N, other.N)
        t: dict = {}
        for k1, v1 in self.table.items():
            w1 = sum(k1)
            for k2, v2 in other.table.items():
                if w1 + sum(k2) <= n:
                    k = tuple(sorted(k1 + k2))
                    t[k] = t.get(k, 0) + v1 * v2
        return TraceSeries(n, t, self.basis)

    def exp(self) -> "TraceSeries":
        if self.constant():
            raise ValueError("exp needs zero constant term")
        out = TraceSeries.const(self.N, 1, self.basis)
        term = out
        for n in range(1, self.N + 1):
            term = (term * self).scale(Fraction(1, n))
            out = out + term
        return out

    def log(self) -> "TraceSeries":
        if self.constant() != 1:
            raise ValueError("log needs constant term 1")
        x = self - TraceSeries.const(self.N, 1, self.basis)
        out = TraceSeries(self.N, {}, self.basis)
        term = TraceSeries.const(self.N, 1, self.basis)
        for n in range(1, self.N + 1):
            term = term * x
            out = out + term.scale(Fraction((-1) ** (n + 1), n))
        return out

    def sqrt(self) -> "TraceSeries":
        c = self.constant()
        if c == -1:
            raise ValueError("square root of a series with constant term -1 is not defined over Q")
        return self.log().scale(Fraction(1, 2)).exp()

    def evaluate(self, values: Mapping[int, object]) -> Fraction:
        """Substitute numbers for the symbols (values[k] for p_k or a_k)."""
        out = Fraction(0)
        for k, v in self.table.items():
            term = v
            for i in k:
                term *= as_rational(values[i])
            out += term
        return out

    def homogeneous(self, w: int) -> "TraceSeries":
        return TraceSeries(self.N, {k: v for k, v in self.table.items() if sum(k) == w}, self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, TraceSeries) and self.N == other.N and self.basis == other.basis and self.table == other.table
        )

    def __repr__(self):
        sym = "p" if self.basis == "power" else "a"
        if not self.table:
            return "0"
        parts = []
        for k, v in sorted(self.table.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mon = "*".join(f"{sym}{i}" for i in k)
            parts.append(f"{v}" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)

    def to_json(self):
        return {
            "basis": self.basis,
            "order": self.N,
            "terms": [{"monomial": list(k), "coeff": str(v)} for k, v in sorted(self.table.items())],
        }


def det_of_series(f: UniSeries, d: int, N: int) -> TraceSeries:
    """det f(A) for a rank d matrix A, as a polynomial in p_k = Tr(A^k) up to total degree N."""
    c0 = f.c[0]
    if c0 not in (1, -1):
        raise ValueError("det_of_series needs f(0) = 1 or -1")
    g = UniSeries(min(N, f.N), f.c).scale(1 / c0)
    lg = g.log()
    tr = TraceSeries(N, {(k,): lg.c[k] for k in range(1, lg.N + 1)})
    return tr.exp().scale(c0 ** d)


def todd(d: int, N: int, convention: str = "standard") -> TraceSeries:
    return det_of_series(q_series(convention, N), d, N)


def modified_todd(d: int, N: int) -> TraceSeries:
    return det_of_series(q_tilde_series(N), d, N)


def j_omega(d: int, N: int) -> TraceSeries:
    return det_of_series(j_series(N), d, N)


def sqrt_todd(d: int, N: int, convention: str = "standard") -> TraceSeries:
    return todd(d, N, convention).sqrt()


def newton_convert(T: TraceSeries, to: str) -> TraceSeries:
    """Rewrite between power sums p_k and elementary traces a_k = tr(Lambda^k A) via Newton's identities."""
    N = T.N
    if to == T.basis:
        return T
    if to == "elementary":
        src, tgt = "power", "elementary"
    elif to == "power":
        src, tgt = "elementary", "power"
    else:
        raise ValueError(f"unknown basis {to!r}")
    if T.basis != src:
        raise ValueError("unexpected basis")
    # express each source generator in the target symbols
    sub: dict = {}
    if tgt == "elementary":
        # p_k = (-1)^{k-1} k a_k + sum_{i=1}^{k-1} (-1)^{k-1+i} a_{k-i} p_i
        for k in range(1, N + 1):
            v = TraceSeries.gen(N, k, tgt).scale((-1) ** (k - 1) * k)
            for i in range(1, k):
                v = v + (TraceSeries.gen(N, k - i, tgt) * sub[i]).scale((-1) ** (k - 1 + i))
            sub[k] = v
    else:
        # k a_k = sum_{i=1}^k (-1)^{i-1} a_{k-i} p_i, a_0 = 1
        for k in range(1, N + 1):
            v = TraceSeries.gen(N, k, tgt).scale((-1) ** (k - 1))
            for i in range(1, k):
                v = v + (sub[k - i] * TraceSeries.gen(N, i, tgt)).scale((-1) ** (i - 1))
            sub[k] = v.scale(Fraction(1, k))
    out = TraceSeries(N, {}, tgt)
    for k, v in T.table.items():
        term = TraceSeries.const(N, v, tgt)
        for i in k:
            term = term * sub[i]
        out = out + term
    return out
