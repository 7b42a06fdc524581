"""Dense univariate polynomials over ExactScalar with Sturm-based root counting."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .scalars import ES, ExactScalar


class Poly:
    """Polynomial with ExactScalar coefficients, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        cs = [ES(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(tuple(c.key() for c in self.coeffs))

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else ES(0)
            b = other.coeffs[i] if i < len(other.coeffs) else ES(0)
            out.append(a + b)
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [ES(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [ES(0)] * max(0, len(self.coeffs) - len(other.coeffs) + 1)
        rem = list(self.coeffs)
        dlc = other.coeffs[-1]
        dn = other.degree
        while len(rem) - 1 >= dn and rem:
            if rem[-1].is_zero():
                rem.pop()
                continue
            k = len(rem) - 1 - dn
            f = rem[-1] / dlc
            q[k] = f
            for i, b in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - f * b
            rem.pop()
        return Poly(q), Poly(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self) -> "Poly":
        return Poly([self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def __call__(self, x) -> ExactScalar:
        acc = ES(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift_scale(self, a, b) -> "Poly":
        """p(a + b*t) as a polynomial in t."""
        acc = Poly([])
        lin = Poly([a, b])
        for c in reversed(self.coeffs):
            acc = acc * lin + Poly([c])
        return acc

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        return Poly([c / lc for c in self.coeffs])

    def squarefree_part(self) -> "Poly":
        d = self.derivative()
        if d.is_zero():
            return self.monic()
        g = poly_gcd(self, d)
        if g.degree == 0:
            return self.monic()
        return self.divmod(g)[0].monic()

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            parts.append(f"({c})*t^{i}" if i else f"({c})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self})"

    def to_int_coeffs(self) -> Optional[list[int]]:
        out = []
        for c in self.coeffs:
            if not c.is_integer():
                return None
            out.append(int(c.as_fraction()))
        return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def sturm_chain(p: Poly) -> list[Poly]:
    p = p.squarefree_part()
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        chain.append(-(chain[-2] % chain[-1]))
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _sign_variations(signs: list[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def _chain_signs_at(chain: list[Poly], x) -> list[int]:
    return [q(x).sign() for q in chain]


def _chain_signs_at_inf(chain: list[Poly], positive: bool) -> list[int]:
    out = []
    for q in chain:
        if q.is_zero():
            out.append(0)
            continue
        s = q.coeffs[-1].sign()
        if not positive and q.degree % 2 == 1:
            s = -s
        out.append(s)
    return out


def count_real_roots(p: Poly, lo=None, hi=None) -> int:
    """Number of distinct real roots of p in (lo, hi); None means +-infinity."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if p.degree == 0:
        return 0
    chain = sturm_chain(p)
    va = _sign_variations(_chain_signs_at(chain, lo) if lo is not None
                          else _chain_signs_at_inf(chain, positive=False))
    vb = _sign_variations(_chain_signs_at(chain, hi) if hi is not None
                          else _chain_signs_at_inf(chain, positive=True))
    return va - vb


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    import math

    lc = abs(p.coeffs[-1])
    m = ES(0)
    for c in p.coeffs[:-1]:
        a = abs(c)
        if a > m:
            m = a
    b = ES(1) + m / lc
    return Fraction(math.ceil(b.to_float()) + 2)


def isolate_real_roots(p: Poly, lo: Optional[Fraction] = None,
                       hi: Optional[Fraction] = None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals (a, b], each containing exactly one real root."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    p = p.squarefree_part()
    if p.degree == 0:
        return []
    bound = root_bound(p)
    a = lo if lo is not None else -bound
    b = hi if hi is not None else bound
    chain = sturm_chain(p)

    def var_at(x: Fraction) -> int:
        return _sign_variations(_chain_signs_at(chain, ES(x)))

    out = []

    def split(a: Fraction, b: Fraction, va: int, vb: int):
        n = va - vb
        if n == 0:
            return
        if n == 1:
            out.append((a, b))
            return
        mid = (a + b) / 2
        if p(ES(mid)).is_zero():
            mid = (a + 2 * b) / 3
            if p(ES(mid)).is_zero():
                mid = (2 * a + b) / 3
        vm = var_at(mid)
        split(a, mid, va, vm)
        split(mid, b, vm, vb)

    split(a, b, var_at(a), var_at(b))
    return out
