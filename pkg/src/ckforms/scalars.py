"""Exact arithmetic in iterated real quadratic extensions of Q.

Values live in towers Q = F_0 < F_1 < ... < F_k where each F_i = F_{i-1}(sqrt(d_i))
for a positive d_i in F_{i-1} that is not a square there.  Square roots are
adjoined on demand (``ExactScalar.sqrt``) after an exact in-field square test,
so the generators of a tower are always independent and the zero test is just
"all coordinates vanish".  Signs are decided recursively: the sign of
a + b*sqrt(d) with a, b of opposite sign is the sign of a^2 - b^2*d.

Element trees are nested pairs ``(lo, hi)`` meaning ``lo + hi*g_level`` with a
plain ``Fraction`` standing for a constant at any level, which keeps purely
rational arithmetic on the fast path.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import mpmath

Tree = Union[Fraction, tuple]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _sqrtfrac(f: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None."""
    if f < 0:
        return None
    pn = math.isqrt(f.numerator)
    pd = math.isqrt(f.denominator)
    if pn * pn == f.numerator and pd * pd == f.denominator:
        return Fraction(pn, pd)
    return None


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s * m**2 with s squarefree; returns (s, m).  Requires n > 0."""
    s, m = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e % 2:
                s *= d
            m *= d ** (e // 2)
        d += 1 if d == 2 else 2
    return s * n, m


class _Gen:
    """One tower generator sqrt(rad); ``rad`` is a tree over the prefix tower."""

    __slots__ = ("rad", "key", "_mpval", "_mpprec")

    def __init__(self, rad: Tree, key: str):
        self.rad = rad
        self.key = key
        self._mpval = None
        self._mpprec = 0


class Tower:
    """Immutable list of quadratic generators over Q."""

    __slots__ = ("gens",)

    def __init__(self, gens: tuple[_Gen, ...] = ()):
        self.gens = gens

    @property
    def depth(self) -> int:
        return len(self.gens)

    # -- tree arithmetic ---------------------------------------------------

    def add(self, x: Tree, y: Tree) -> Tree:
        if isinstance(x, Fraction) and isinstance(y, Fraction):
            return x + y
        if isinstance(x, Fraction):
            return (self.add(y[0], x), y[1])
        if isinstance(y, Fraction):
            return (self.add(x[0], y), x[1])
        return (self.add(x[0], y[0]), self.add(x[1], y[1]))

    def neg(self, x: Tree) -> Tree:
        if isinstance(x, Fraction):
            return -x
        return (self.neg(x[0]), self.neg(x[1]))

    def sub(self, x: Tree, y: Tree) -> Tree:
        return self.add(x, self.neg(y))

    def mul(self, x: Tree, y: Tree, level: int) -> Tree:
        if isinstance(x, Fraction):
            if isinstance(y, Fraction):
                return x * y
            if x == 0:
                return _ZERO
            return (self.mul(x, y[0], level - 1), self.mul(x, y[1], level - 1))
        if isinstance(y, Fraction):
            return self.mul(y, x, level)
        a, b = x
        c, d = y
        rad = self.gens[level - 1].rad
        ac = self.mul(a, c, level - 1)
        bd = self.mul(b, d, level - 1)
        lo = self.add(ac, self.mul(bd, rad, level - 1))
        hi = self.add(self.mul(a, d, level - 1), self.mul(b, c, level - 1))
        return (lo, hi)

    def is_zero(self, x: Tree) -> bool:
        if isinstance(x, Fraction):
            return x == 0
        return self.is_zero(x[0]) and self.is_zero(x[1])

    def sign(self, x: Tree, level: int) -> int:
        if isinstance(x, Fraction):
            return (x > 0) - (x < 0)
        lo, hi = x
        sh = self.sign(hi, level - 1)
        if sh == 0:
            return self.sign(lo, level - 1)
        sl = self.sign(lo, level - 1)
        if sl == 0:
            return sh
        if sl == sh:
            return sl
        rad = self.gens[level - 1].rad
        # lo and hi*g differ in sign; compare |lo| with |hi|*g via squares.
        d = self.sub(self.mul(lo, lo, level - 1),
                     self.mul(self.mul(hi, hi, level - 1), rad, level - 1))
        sd = self.sign(d, level - 1)
        return sd if sl > 0 else -sd

    def inv(self, x: Tree, level: int) -> Tree:
        if isinstance(x, Fraction):
            if x == 0:
                raise ZeroDivisionError("division by zero ExactScalar")
            return 1 / x
        a, b = x
        if self.is_zero(b):
            return (self.inv(a, level - 1), _ZERO)
        rad = self.gens[level - 1].rad
        den = self.sub(self.mul(a, a, level - 1),
                       self.mul(self.mul(b, b, level - 1), rad, level - 1))
        if self.is_zero(den):
            raise ZeroDivisionError("division by zero ExactScalar")
        di = self.inv(den, level - 1)
        return (self.mul(a, di, level - 1), self.neg(self.mul(b, di, level - 1)))

    def field_sqrt(self, x: Tree, level: int) -> Optional[Tree]:
        """A tree y >= 0 with y*y == x inside F_level, or None."""
        if isinstance(x, Fraction):
            if level == 0:
                return _sqrtfrac(x)
            r = self.field_sqrt(x, level - 1)
            if r is not None:
                return r if isinstance(r, Fraction) else (r, _ZERO)
            rad = self.gens[level - 1].rad
            t = self.field_sqrt(self.mul(x, self.inv(rad, level - 1), level - 1),
                                level - 1)
            if t is not None:
                return (_ZERO, t) if not self.is_zero(t) else _ZERO
            return None
        p, q = x
        rad = self.gens[level - 1].rad
        if self.is_zero(q):
            r = self.field_sqrt(p, level - 1)
            if r is not None:
                return (r, _ZERO)
            t = self.field_sqrt(self.mul(p, self.inv(rad, level - 1), level - 1),
                                level - 1)
            if t is not None:
                return (_ZERO, t)
            return None
        disc = self.sub(self.mul(p, p, level - 1),
                        self.mul(self.mul(q, q, level - 1), rad, level - 1))
        if self.sign(disc, level - 1) < 0:
            return None
        r = self.field_sqrt(disc, level - 1)
        if r is None:
            return None
        half = Fraction(1, 2)
        for z in (self.mul(self.add(p, r), half, level - 1),
                  self.mul(self.sub(p, r), half, level - 1)):
            if self.sign(z, level - 1) < 0:
                continue
            a = self.field_sqrt(z, level - 1)
            if a is None or self.is_zero(a):
                continue
            b = self.mul(q, self.inv(self.mul(a, Fraction(2), level - 1), level - 1),
                         level - 1)
            cand = (a, b)
            sq = self.mul(cand, cand, level)
            if self.is_zero(self.sub(sq, x)):
                if self.sign(cand, level) < 0:
                    cand = self.neg(cand)
                return cand
        return None

    # -- numeric evaluation ------------------------------------------------

    def gen_mp(self, i: int, prec: int):
        g = self.gens[i]
        if g._mpval is None or g._mpprec < prec:
            with mpmath.workprec(prec):
                g._mpval = mpmath.sqrt(self.eval_mp(g.rad, i, prec))
                g._mpprec = prec
        return g._mpval

    def eval_mp(self, x: Tree, level: int, prec: int):
        if isinstance(x, Fraction):
            with mpmath.workprec(prec):
                return mpmath.mpf(x.numerator) / x.denominator
        with mpmath.workprec(prec):
            return (self.eval_mp(x[0], level - 1, prec)
                    + self.eval_mp(x[1], level - 1, prec) * self.gen_mp(level - 1, prec))

    def eval_iv(self, x: Tree, level: int):
        if isinstance(x, Fraction):
            return mpmath.iv.mpf([mpmath.mpf(x.numerator), mpmath.mpf(x.numerator)]) / x.denominator
        giv = mpmath.iv.sqrt(self.eval_iv(self.gens[level - 1].rad, level - 1))
        return self.eval_iv(x[0], level - 1) + self.eval_iv(x[1], level - 1) * giv


_EMPTY_TOWER = Tower()


def _promote(tree: Tree, times: int) -> Tree:
    for _ in range(times):
        if not isinstance(tree, Fraction):
            tree = (tree, _ZERO)
    return tree


class ExactScalar:
    """An element of Q extended by finitely many nested real square roots."""

    __slots__ = ("_tower", "_tree", "_key")

    def __init__(self, tower: Tower, tree: Tree):
        self._tower = tower
        self._tree = tree
        self._key = None

    # -- construction --------------------------------------------------

    @staticmethod
    def of(x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return ExactScalar(_EMPTY_TOWER, Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to ExactScalar")

    @staticmethod
    def sqrt_int(n: int) -> "ExactScalar":
        return ExactScalar.of(n).sqrt()

    # -- tower alignment ------------------------------------------------

    def _aligned(self, other: "ExactScalar"):
        ta, tb = self._tower, other._tower
        if ta is tb:
            return ta, self._tree, other._tree
        if isinstance(other._tree, Fraction):
            return ta, self._tree, other._tree
        if isinstance(self._tree, Fraction):
            return tb, self._tree, other._tree
        if tb.depth <= ta.depth and tb.gens == ta.gens[:tb.depth]:
            return ta, self._tree, _promote(other._tree, ta.depth - tb.depth)
        if ta.depth <= tb.depth and ta.gens == tb.gens[:ta.depth]:
            return tb, _promote(self._tree, tb.depth - ta.depth), other._tree
        merged, images = _embed(ta, tb)
        tree_a = _promote(self._tree, merged.depth - ta.depth)
        tree_b = _convert(other._tree, tb.depth, images, merged)
        return merged, tree_a, tree_b

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(x) -> Optional["ExactScalar"]:
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return ExactScalar(_EMPTY_TOWER, Fraction(x))
        return None

    def __add__(self, other):
        other = ExactScalar._coerce(other)
        if other is None:
            return NotImplemented
        tw, a, b = self._aligned(other)
        return ExactScalar(tw, tw.add(a, b))

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(self._tower, self._tower.neg(self._tree))

    def __sub__(self, other):
        other = ExactScalar._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = ExactScalar._coerce(other)
        if other is None:
            return NotImplemented
        tw, a, b = self._aligned(other)
        return ExactScalar(tw, tw.mul(a, b, tw.depth))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ExactScalar._coerce(other)
        if other is None:
            return NotImplemented
        tw, a, b = self._aligned(other)
        return ExactScalar(tw, tw.mul(a, tw.inv(b, tw.depth), tw.depth))

    def __rtruediv__(self, other):
        return ExactScalar.of(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("ExactScalar powers must be integers")
        if n < 0:
            return (ExactScalar.of(1) / self) ** (-n)
        result = ExactScalar.of(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- predicates --------------------------------------------------------

    def sign(self) -> int:
        return self._tower.sign(self._tree, self._tower.depth)

    def is_zero(self) -> bool:
        return self._tower.is_zero(self._tree)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, ExactScalar)):
            return (self - other).is_zero()
        return NotImplemented

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def is_rational(self) -> bool:
        return all(mono == () for mono, _ in self._monomials())

    def as_fraction(self) -> Fraction:
        mons = self._monomials()
        if any(mono != () for mono, _ in mons):
            raise ValueError("value is not rational")
        return mons[0][1] if mons else _ZERO

    def is_integer(self) -> bool:
        try:
            f = self.as_fraction()
        except ValueError:
            return False
        return f.denominator == 1

    # -- square roots ---------------------------------------------------------

    def sqrt(self) -> "ExactScalar":
        s = self.sign()
        if s < 0:
            raise ValueError(f"square root of negative value {self}")
        if s == 0:
            return ExactScalar.of(0)
        tw = self._tower
        inside = tw.field_sqrt(self._tree, tw.depth)
        if inside is not None:
            return ExactScalar(tw, inside)
        coeff, rad_value, rad_key = _normalize_radicand(self)
        if rad_value.is_rational():
            return _int_radical_scalar(int(rad_value.as_fraction())) * coeff
        rt = rad_value._tower
        gen = _Gen(rad_value._tree, rad_key)
        return ExactScalar(Tower(rt.gens + (gen,)), (_ZERO, _ONE)) * coeff

    # -- canonical form ------------------------------------------------------

    def _monomials(self):
        """Expansion into (sorted tuple of gen keys, Fraction) pairs."""
        out: dict[tuple, Fraction] = {}
        tw = self._tower

        def walk(tree: Tree, level: int, mono: tuple):
            if isinstance(tree, Fraction):
                if tree:
                    out[mono] = out.get(mono, _ZERO) + tree
                return
            walk(tree[0], level - 1, mono)
            walk(tree[1], level - 1, mono + (level - 1,))

        walk(self._tree, tw.depth, ())
        items = []
        for mono, coeff in out.items():
            if coeff == 0:
                continue
            items.append((mono, coeff))
        return items

    def _canonical_terms(self):
        """[(Fraction coeff, radical key string or None)], sorted by key.

        Gen keys are fixed at adjoin time, so rendering is linear; integer
        radicals inside one monomial are combined arithmetically.
        """
        tw = self._tower
        merged: dict[Optional[str], Fraction] = {}
        for mono, coeff in self._monomials():
            if mono == ():
                key = None
            else:
                s = 1
                nested = []
                for gi in mono:
                    rad = tw.gens[gi].rad
                    if isinstance(rad, Fraction) and rad.denominator == 1:
                        s *= rad.numerator
                    else:
                        nested.append(tw.gens[gi].key)
                sq, m = _squarefree_split(s) if s > 1 else (1, 1)
                coeff = coeff * m
                parts = ([f"sqrt({sq})"] if sq > 1 else []) + sorted(nested)
                key = "*".join(parts) if parts else None
            merged[key] = merged.get(key, _ZERO) + coeff
        out = [(c, k) for k, c in merged.items() if c != 0]
        out.sort(key=lambda t: ("" if t[1] is None else t[1]))
        return out

    def key(self) -> str:
        if self._key is None:
            terms = self._canonical_terms()
            if not terms:
                self._key = "0"
            else:
                pieces = []
                for i, (coeff, radkey) in enumerate(terms):
                    txt = str(coeff) if radkey is None else f"{coeff}*{radkey}"
                    if i > 0 and not txt.startswith("-"):
                        txt = "+" + txt
                    pieces.append(txt)
                self._key = "".join(pieces)
        return self._key

    def __hash__(self):
        # Equal irrational values admit distinct nested presentations, so only
        # rationals get a discriminating hash; equality stays exact.
        try:
            return hash(self.as_fraction())
        except ValueError:
            return 0x5CA1A5

    def __str__(self):
        return self.key()

    def __repr__(self):
        return f"ExactScalar({self})"

    # -- numerics -----------------------------------------------------------

    def to_float(self) -> float:
        return float(self._tower.eval_mp(self._tree, self._tower.depth, 80))

    def __float__(self) -> float:
        return self.to_float()

    def interval(self):
        """mpmath interval guaranteed to contain the exact value."""
        return self._tower.eval_iv(self._tree, self._tower.depth)


def _prefix_tower(tw: Tower, i: int) -> Tower:
    if i == tw.depth:
        return tw
    return Tower(tw.gens[:i])


@lru_cache(maxsize=None)
def _int_radical_scalar(s: int) -> "ExactScalar":
    gen = _Gen(Fraction(s), f"sqrt({s})")
    return ExactScalar(Tower((gen,)), (_ZERO, _ONE))


def _normalize_radicand(x: ExactScalar):
    """Split x > 0 as coeff**2 * radicand with a canonical primitive radicand.

    Returns (coeff, radicand, radicand key); coeff is an ExactScalar that may
    itself contain integer square roots.
    """
    mons = x._monomials()
    if len(mons) == 1 and mons[0][0] == ():
        f = mons[0][1]
        s1, m1 = _squarefree_split(f.numerator * f.denominator)
        coeff = ExactScalar.of(Fraction(m1, f.denominator))
        if s1 == 1:
            return coeff, ExactScalar.of(1), "1"
        rad = ExactScalar.of(s1)
        return coeff, rad, f"sqrt({s1})"
    num_gcd = 0
    den_lcm = 1
    for _, c in mons:
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    G, L = Fraction(num_gcd), Fraction(den_lcm)
    primitive = x * (L / G)
    gl = (G * L)
    s, m = _squarefree_split(gl.numerator * gl.denominator)
    coeff = ExactScalar.of(Fraction(m, den_lcm))
    rad = primitive * s
    return coeff, rad, f"sqrt({rad.key()})"


def _embed(dst: Tower, src: Tower):
    """Extend dst so it contains src's generators; return (tower, gen images)."""
    images: list[Tree] = []
    cur = dst
    for i, g in enumerate(src.gens):
        rad_img = _convert(g.rad, i, images, cur)
        found = cur.field_sqrt(rad_img, cur.depth)
        if found is not None:
            images.append(found)
            continue
        coeff, rad_value, rad_key = _normalize_radicand(ExactScalar(cur, rad_img))
        gen = _Gen(rad_value._tree, rad_key)
        bigger = Tower(cur.gens + (gen,))
        root = ExactScalar(bigger, (_ZERO, _ONE)) * coeff
        images = [_promote(t, 1) for t in images]
        cur = bigger
        images.append(root._tree)
    return cur, images


def _convert(tree: Tree, level: int, images: list[Tree], dst: Tower) -> Tree:
    if isinstance(tree, Fraction):
        return tree
    lo = _convert(tree[0], level - 1, images, dst)
    hi = _convert(tree[1], level - 1, images, dst)
    return dst.add(lo, dst.mul(hi, images[level - 1], dst.depth))


ES = ExactScalar.of
ZERO = ExactScalar.of(0)
ONE = ExactScalar.of(1)


# -- exact literal parsing ("p/q", "a+b*sqrt(r)") ---------------------------

def parse_scalar(text: str) -> ExactScalar:
    """Parse an exact scalar literal: sums of rational terms and rational
    multiples of sqrt(integer).  Floats are rejected."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    if set(s) - set("0123456789+-*/()sqrt"):
        raise ValueError(f"invalid characters in scalar literal {text!r}")
    total = ExactScalar.of(0)
    i = 0
    n = len(s)
    while i < n:
        sign = 1
        while i < n and s[i] in "+-":
            if s[i] == "-":
                sign = -sign
            i += 1
        j = i
        while j < n and (s[j].isdigit() or s[j] == "/"):
            j += 1
        coeff = Fraction(1)
        had_number = j > i
        if had_number:
            coeff = Fraction(s[i:j])
            i = j
        if i < n and s[i] == "*":
            i += 1
        if s.startswith("sqrt(", i):
            depth = 1
            k = i + 5
            while k < n and depth:
                if s[k] == "(":
                    depth += 1
                elif s[k] == ")":
                    depth -= 1
                k += 1
            if depth:
                raise ValueError(f"unbalanced sqrt() in {text!r}")
            inner = parse_scalar(s[i + 5:k - 1])
            total = total + sign * coeff * inner.sqrt()
            i = k
        elif had_number:
            total = total + sign * coeff
        else:
            raise ValueError(f"cannot parse scalar literal {text!r}")
    return total
