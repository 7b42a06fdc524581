"""Exponential-trigonometric polynomials  sum_i p_i(t) * e^(a_i t) * trig(b_i t).

Terms are kept in a canonical merged form keyed by (rate, frequency, kind) with
kind in {"pure", "cos", "sin"}; frequencies are normalized nonnegative and a
zero frequency collapses to "pure".  Products rewrite pairs of trig factors
into sums, so identities such as sin^2 + cos^2 = 1 hold syntactically after
multiplication.

Exact evaluation is supported at t = 0, at rational multiples of pi whose
angles land on the 30/45-degree lattice (values become polynomials in pi over
the scalar field, see PiPoly), and at t = log(u) for exact u > 0 when every
frequency vanishes and all rates are integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import mpmath

from .polynomials import Poly
from .scalars import ES, ExactScalar

PURE, COS, SIN = "pure", "cos", "sin"


def _norm_term(rate: ExactScalar, freq: ExactScalar, kind: str, poly: Poly):
    """Normalize one term; returns (rate, freq, kind, poly) or None if zero."""
    if poly.is_zero():
        return None
    if kind == PURE or freq.is_zero():
        if kind == SIN and freq.is_zero():
            return None
        return (rate, ES(0), PURE, poly)
    s = freq.sign()
    if s < 0:
        freq = -freq
        if kind == SIN:
            poly = -poly
    return (rate, freq, kind, poly)


class ExpPoly:
    """Canonical finite sum of terms p(t)*e^(rate*t)*{1, cos, sin}(freq*t)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable = ()):
        merged: list = []
        for item in terms:
            t = _norm_term(*item)
            if t is None:
                continue
            rate, freq, kind, poly = t
            for i, (r2, f2, k2, p2) in enumerate(merged):
                if k2 == kind and r2 == rate and f2 == freq:
                    merged[i] = (r2, f2, k2, p2 + poly)
                    break
            else:
                merged.append((rate, freq, kind, poly))
        self.terms = tuple((r, f, k, p) for (r, f, k, p) in merged if not p.is_zero())

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(c) -> "ExpPoly":
        return ExpPoly([(ES(0), ES(0), PURE, Poly([c]))])

    @staticmethod
    def t_poly(coeffs) -> "ExpPoly":
        return ExpPoly([(ES(0), ES(0), PURE, Poly(coeffs))])

    @staticmethod
    def exp(rate) -> "ExpPoly":
        return ExpPoly([(ES(rate), ES(0), PURE, Poly([1]))])

    @staticmethod
    def trig(kind: str, freq, rate=0) -> "ExpPoly":
        return ExpPoly([(ES(rate), ES(freq), kind, Poly([1]))])

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        other = other if isinstance(other, ExpPoly) else ExpPoly.constant(other)
        return ExpPoly(list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly([(r, f, k, -p) for (r, f, k, p) in self.terms])

    def __sub__(self, other):
        other = other if isinstance(other, ExpPoly) else ExpPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            return ExpPoly([(r, f, k, p * ES(other)) for (r, f, k, p) in self.terms])
        out = []
        half = Fraction(1, 2)
        for (r1, f1, k1, p1) in self.terms:
            for (r2, f2, k2, p2) in other.terms:
                rate = r1 + r2
                poly = p1 * p2
                if k1 == PURE and k2 == PURE:
                    out.append((rate, ES(0), PURE, poly))
                elif k1 == PURE or k2 == PURE:
                    f, k = (f2, k2) if k1 == PURE else (f1, k1)
                    out.append((rate, f, k, poly))
                else:
                    hp = poly * half
                    if k1 == COS and k2 == COS:
                        out.append((rate, f1 - f2, COS, hp))
                        out.append((rate, f1 + f2, COS, hp))
                    elif k1 == SIN and k2 == SIN:
                        out.append((rate, f1 - f2, COS, hp))
                        out.append((rate, f1 + f2, COS, -hp))
                    elif k1 == SIN and k2 == COS:
                        out.append((rate, f1 + f2, SIN, hp))
                        out.append((rate, f1 - f2, SIN, hp))
                    else:  # cos * sin
                        out.append((rate, f1 + f2, SIN, hp))
                        out.append((rate, f1 - f2, SIN, -hp))
        return ExpPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "ExpPoly":
        out = []
        for (r, f, k, p) in self.terms:
            out.append((r, f, k, p.derivative() + p * r))
            if k == COS:
                out.append((r, f, SIN, -(p * f)))
            elif k == SIN:
                out.append((r, f, COS, p * f))
        return ExpPoly(out)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        other = other if isinstance(other, ExpPoly) else ExpPoly.constant(other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash(len(self.terms))

    def as_constant(self) -> Optional[ExactScalar]:
        if self.is_zero():
            return ES(0)
        if (len(self.terms) == 1 and self.terms[0][2] == PURE
                and self.terms[0][0].is_zero() and self.terms[0][3].degree == 0):
            return self.terms[0][3].coeffs[0]
        return None

    # -- evaluation ----------------------------------------------------------

    def at_zero(self) -> ExactScalar:
        acc = ES(0)
        for (_, _, k, p) in self.terms:
            if k != SIN and p.coeffs:
                acc = acc + p.coeffs[0]
        return acc

    def eval_float(self, t: float) -> float:
        with mpmath.workprec(120):
            return float(self.eval_mp(mpmath.mpf(t)))

    def eval_mp(self, t, prec: int = 120):
        def num(x: ExactScalar):
            return x._tower.eval_mp(x._tree, x._tower.depth, prec)

        acc = mpmath.mpf(0)
        for (r, f, k, p) in self.terms:
            val = mpmath.mpf(0)
            tm = mpmath.mpf(1)
            for c in p.coeffs:
                val += num(c) * tm
                tm *= t
            e = mpmath.exp(num(r) * t)
            if k == COS:
                e *= mpmath.cos(num(f) * t)
            elif k == SIN:
                e *= mpmath.sin(num(f) * t)
            acc += val * e
        return acc

    def eval_interval(self, t_iv):
        """Certified interval evaluation; t_iv is an mpmath.iv number."""
        acc = mpmath.iv.mpf(0)
        for (r, f, k, p) in self.terms:
            val = mpmath.iv.mpf(0)
            tm = mpmath.iv.mpf(1)
            for c in p.coeffs:
                val += c.interval() * tm
                tm *= t_iv
            e = mpmath.iv.exp(r.interval() * t_iv)
            if k == COS:
                e *= mpmath.iv.cos(f.interval() * t_iv)
            elif k == SIN:
                e *= mpmath.iv.sin(f.interval() * t_iv)
            acc += val * e
        return acc

    def at_pi_multiple(self, q: Fraction) -> "PiPoly":
        """Exact value at t = q*pi as a polynomial in pi.

        Requires every rate to vanish and every angle freq*q to land on the
        exact-trig lattice (denominator dividing 12/... i.e. in {1,2,3,4,6}).
        """
        q = Fraction(q)
        coeffs: dict[int, ExactScalar] = {}
        for (r, f, k, p) in self.terms:
            if not r.is_zero() and q != 0:
                raise ValueError("exact pi-multiple evaluation needs zero rates")
            if k == PURE:
                trig = ES(1)
            else:
                fq = f * q
                if not fq.is_rational():
                    raise ValueError(f"angle {f}*{q}*pi is not exactly evaluable")
                trig = trig_at_rational_pi(fq.as_fraction(), k)
            for i, c in enumerate(p.coeffs):
                add = c * trig * (q ** i)
                if add.is_zero():
                    continue
                coeffs[i] = coeffs.get(i, ES(0)) + add
        top = max(coeffs) if coeffs else 0
        return PiPoly([coeffs.get(i, ES(0)) for i in range(top + 1)])

    def at_log(self, u: ExactScalar, rate_unit=None) -> ExactScalar:
        """Exact value at t = log(u)/rate_unit; needs pure-exponential terms,
        constant coefficient polynomials and integer rate/rate_unit ratios."""
        if u.sign() <= 0:
            raise ValueError("log argument must be positive")
        acc = ES(0)
        for (r, f, k, p) in self.terms:
            if k != PURE:
                raise ValueError("exact log evaluation needs trig-free terms")
            if p.degree > 0:
                raise ValueError("exact log evaluation needs constant coefficients")
            expo = r if rate_unit is None else r / rate_unit
            if not expo.is_integer():
                raise ValueError("exact log evaluation needs integer rate ratios")
            acc = acc + p.coeffs[0] * (u ** int(expo.as_fraction()))
        return acc

    # -- structure probes -------------------------------------------------

    def rates(self) -> list[ExactScalar]:
        out: list[ExactScalar] = []
        for (r, _, _, _) in self.terms:
            if all(not (r == x) for x in out):
                out.append(r)
        return out

    def freqs(self) -> list[ExactScalar]:
        out: list[ExactScalar] = []
        for (_, f, k, _) in self.terms:
            if k != PURE and all(not (f == x) for x in out):
                out.append(f)
        return out

    def max_poly_degree(self) -> int:
        return max((p.degree for (_, _, _, p) in self.terms), default=-1)

    def is_pure_trig(self) -> bool:
        return all(r.is_zero() and p.degree == 0 for (r, _, _, p) in self.terms)

    def is_pure_exp(self) -> bool:
        return all(k == PURE for (_, _, k, _) in self.terms)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> list[dict]:
        items = []
        for (r, f, k, p) in self.terms:
            items.append({
                "kind": k,
                "rate": str(r),
                "freq": str(f),
                "poly": [str(c) for c in p.coeffs],
            })
        items.sort(key=lambda d: (d["kind"], d["rate"], d["freq"]))
        return items

    def __str__(self):
        if self.is_zero():
            return "0"
        bits = []
        for (r, f, k, p) in self.terms:
            s = f"({p})"
            if not r.is_zero():
                s += f"*exp({r}*t)"
            if k != PURE:
                s += f"*{k}({f}*t)"
            bits.append(s)
        return " + ".join(bits)

    def __repr__(self):
        return f"ExpPoly({self})"


def _cos_table(den: int) -> list[ExactScalar]:
    r2 = ES(2).sqrt()
    r3 = ES(3).sqrt()
    half = ES(Fraction(1, 2))
    if den == 1:
        return [ES(1), ES(-1)]
    if den == 2:
        return [ES(1), ES(0), ES(-1), ES(0)]
    if den == 3:
        return [ES(1), half, -half, ES(-1), -half, half]
    if den == 4:
        q = r2 * Fraction(1, 2)
        return [ES(1), q, ES(0), -q, ES(-1), -q, ES(0), q]
    if den == 6:
        h3 = r3 * Fraction(1, 2)
        return [ES(1), h3, half, ES(0), -half, -h3,
                ES(-1), -h3, -half, ES(0), half, h3]
    raise ValueError(f"no exact trig values for denominator {den}")


def trig_at_rational_pi(r: Fraction, kind: str) -> ExactScalar:
    """cos(r*pi) or sin(r*pi) exactly, for r with denominator in 1,2,3,4,6."""
    if kind == SIN:
        return trig_at_rational_pi(Fraction(1, 2) - r, COS)
    den = r.denominator
    table = _cos_table(den)
    k = r.numerator % (2 * den)
    return table[k]


class PiPoly:
    """A polynomial in pi with ExactScalar coefficients; sign is decidable
    because pi is transcendental over the coefficient field."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [ES(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def as_scalar(self) -> ExactScalar:
        if self.is_zero():
            return ES(0)
        if len(self.coeffs) == 1:
            return self.coeffs[0]
        raise ValueError(f"{self} genuinely involves pi")

    def sign(self) -> int:
        if self.is_zero():
            return 0
        for bits in (64, 256, 1024, 4096):
            old = mpmath.iv.prec
            try:
                mpmath.iv.prec = bits
                acc = mpmath.iv.mpf(0)
                piv = mpmath.iv.pi
                p = mpmath.iv.mpf(1)
                for c in self.coeffs:
                    acc += c.interval() * p
                    p *= piv
            finally:
                mpmath.iv.prec = old
            if acc.a > 0:
                return 1
            if acc.b < 0:
                return -1
        raise RuntimeError(f"could not separate {self} from zero")

    def __str__(self):
        if self.is_zero():
            return "0"
        return " + ".join(f"({c})*pi^{i}" if i else f"({c})"
                          for i, c in enumerate(self.coeffs) if not c.is_zero())

    def __repr__(self):
        return f"PiPoly({self})"
