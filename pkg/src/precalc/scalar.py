"""Exact coefficients: rationals, sparse polynomials, exterior (super) coefficients and Koszul signs."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exp = tuple  # exponent vector


def as_rational(x) -> Fraction:
    """Parse an int, Fraction or "p/q" string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def rational_to_json(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _norm(c):
    # keep integers as ints; they are much faster than Fractions
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    """Sparse polynomial in m commuting variables with rational coefficients."""

    __slots__ = ("m", "terms", "_hash")

    def __init__(self, m: int, terms: Mapping[Exp, object] | None = None, *, _clean: bool = False):
        self.m = m
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms  # caller guarantees normal form
        else:
            t = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != m:
                    raise ValueError(f"exponent {e} has wrong length for m={m}")
                if c:
                    t[e] = t.get(e, 0) + _norm(as_rational(c) if isinstance(c, str) else c)
            self.terms = {e: _norm(c) for e, c in t.items() if c}
        self._hash = None

    @classmethod
    def const(cls, m: int, c=1) -> "Poly":
        c = _norm(as_rational(c) if isinstance(c, str) else c)
        return cls(m, {(0,) * m: c} if c else {}, _clean=True)

    @classmethod
    def var(cls, m: int, j: int, power: int = 1) -> "Poly":
        if not 0 <= j < m:
            raise IndexError(f"variable index {j} out of range for m={m}")
        e = [0] * m
        e[j] = power
        return cls(m, {tuple(e): 1}, _clean=True)

    @classmethod
    def zero(cls, m: int) -> "Poly":
        return cls(m, {}, _clean=True)

    def is_zero(self) -> bool:
        return not self.terms

    __bool__ = lambda self: bool(self.terms)

    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def const_term(self):
        return self.terms.get((0,) * self.m, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def _check(self, other: "Poly"):
        if self.m != other.m:
            raise ValueError(f"variable count mismatch: {self.m} vs {other.m}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.m, other)
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = _norm(v)
            else:
                t.pop(e, None)
        return Poly(self.m, t, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.m, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.m, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        if not c:
            return Poly.zero(self.m)
        if c == 1:
            return self
        return Poly(self.m, {e: _norm(v * c) for e, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.m)
        t: dict = {}
        m = self.m
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(e1[i] + e2[i] for i in range(m)) if m else ()
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(m, {e: _norm(c) for e, c in t.items() if c}, _clean=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        r = Poly.const(self.m, 1)
        for _ in range(n):
            r = r * self
        return r

    def derive(self, j: int) -> "Poly":
        if not 0 <= j < self.m:
            raise IndexError(f"variable index {j} out of range for m={self.m}")
        t = {}
        for e, c in self.terms.items():
            k = e[j]
            if k:
                t[e[:j] + (k - 1,) + e[j + 1:]] = c * k
        return Poly(self.m, t, _clean=True)

    def truncate(self, n: int) -> "Poly":
        """Drop terms of total degree > n."""
        return Poly(self.m, {e: c for e, c in self.terms.items() if sum(e) <= n}, _clean=True)

    def substitute(self, values: Sequence) -> Fraction:
        """Evaluate at rational values."""
        total = Fraction(0)
        for e, c in self.terms.items():
            v = Fraction(c)
            for x, k in zip(values, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def max_abs_coeff(self) -> Fraction:
        return max((abs(Fraction(c)) for c in self.terms.values()), default=Fraction(0))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.m == other.m and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(0,) * self.m: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"y{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def to_json(self) -> list:
        return [{"exponents": list(e), "coeff": rational_to_json(self.terms[e])} for e in sorted(self.terms)]

    @classmethod
    def from_json(cls, m: int, data) -> "Poly":
        if isinstance(data, (int, str)):
            return cls.const(m, as_rational(data))
        t: dict = {}
        for item in data:
            e = tuple(int(k) for k in item["exponents"])
            t[e] = t.get(e, 0) + as_rational(item["coeff"])
        return cls(m, t)


def poly_derive(p: Poly, j: int) -> Poly:
    return p.derive(j)


def truncate(p: Poly, n: int) -> Poly:
    return p.truncate(n)


class Truncation:
    """Discard terms of total degree above ``n``."""

    __slots__ = ("n",)

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("truncation degree must be non-negative")
        self.n = n

    def __call__(self, p: Poly) -> Poly:
        return p.truncate(self.n)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return (a.truncate(self.n) * b.truncate(self.n)).truncate(self.n)

    def __repr__(self):
        return f"Truncation({self.n})"


def koszul_sign(permutation: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign of reordering items of the given degrees so that item permutation[k] lands at position k."""
    n = len(permutation)
    if len(degrees) != n:
        raise ValueError("degrees and permutation lengths differ")
    if sorted(permutation) != list(range(n)):
        raise ValueError(f"not a bijection: {permutation}")
    s = 0
    for a in range(n):
        pa = permutation[a]
        for b in range(a + 1, n):
            pb = permutation[b]
            if pa > pb:
                s += degrees[pa] * degrees[pb]
    return -1 if s % 2 else 1


def sort_sign(idx: Sequence[int]) -> tuple[int, tuple | None]:
    """Sort odd symbols; return (sign, sorted tuple) or (0, None) on a repeat."""
    idx = list(idx)
    sign = 1
    # insertion sort counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(idx)):
        if idx[i] == idx[i - 1]:
            return 0, None
    return sign, tuple(idx)


def merge_sign(a: tuple, b: tuple) -> tuple[int, tuple | None]:
    """Sign and result of the exterior product of two sorted index tuples."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    sa = set(a)
    if any(x in sa for x in b):
        return 0, None
    # count pairs (x in a, y in b) with x > y
    inv = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inv += j
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


class SuperScalar:
    """Element of the free graded-commutative algebra on odd generators eta_0..eta_{s-1} over Poly."""

    __slots__ = ("s", "m", "terms")

    def __init__(self, s: int, m: int, terms: Mapping[tuple, Poly] | None = None):
        self.s = s
        self.m = m
        t = {}
        for k, p in (terms or {}).items():
            sign, key = sort_sign(k)
            if not sign:
                continue
            if any(not 0 <= i < s for i in key):
                raise IndexError(f"eta index out of range in {k}")
            if sign < 0:
                p = -p
            t[key] = t[key] + p if key in t else p
        self.terms = {k: p for k, p in t.items() if p}

    @classmethod
    def eta(cls, s: int, m: int, i: int) -> "SuperScalar":
        return cls(s, m, {(i,): Poly.const(m, 1)})

    @classmethod
    def scalar(cls, s: int, m: int, p) -> "SuperScalar":
        if not isinstance(p, Poly):
            p = Poly.const(m, p)
        return cls(s, m, {(): p})

    def _check(self, other):
        if self.s != other.s or self.m != other.m:
            raise ValueError(f"generator count mismatch: ({self.s},{self.m}) vs ({other.s},{other.m})")

    def is_zero(self):
        return not self.terms

    def homogeneous_degree(self) -> int | None:
        ds = {len(k) for k in self.terms}
        return ds.pop() if len(ds) == 1 else (0 if not ds else None)

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for k, p in other.terms.items():
            t[k] = t[k] + p if k in t else p
        return SuperScalar(self.s, self.m, t)

    def __neg__(self):
        return SuperScalar(self.s, self.m, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SuperScalar):
            return SuperScalar(self.s, self.m, {k: p * other for k, p in self.terms.items()})
        self._check(other)
        t: dict = {}
        for k1, p1 in self.terms.items():
            for k2, p2 in other.terms.items():
                sign, k = merge_sign(k1, k2)
                if not sign:
                    continue
                q = p1 * p2
                if sign < 0:
                    q = -q
                t[k] = t[k] + q if k in t else q
        return SuperScalar(self.s, self.m, t)

    def __eq__(self, other):
        if not isinstance(other, SuperScalar):
            return NotImplemented
        return (self.s, self.m) == (other.s, other.m) and self.terms == other.terms

    def __hash__(self):
        return hash((self.s, self.m, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            ("(" + repr(p) + ")" if k == () else f"({p!r})*" + "".join(f"eta{i}" for i in k))
            for k, p in sorted(self.terms.items())
        )

    def to_json(self) -> list:
        return [{"etas": list(k), "poly": p.to_json()} for k, p in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, s: int, m: int, data) -> "SuperScalar":
        return cls(s, m, {tuple(item["etas"]): Poly.from_json(m, item["poly"]) for item in data})


def super_mul(a: SuperScalar, b: SuperScalar) -> SuperScalar:
    return a * b


def sum_polys(m: int, items: Iterable[Poly]) -> Poly:
    t: dict = {}
    for p in items:
        for e, c in p.terms.items():
            t[e] = t.get(e, 0) + c
    return Poly(m, {e: _norm(c) for e, c in t.items() if c}, _clean=True)
