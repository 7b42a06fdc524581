"""Closed-form one-parameter flows exp(tW) for W = [[0, D'],[D, 0]], their
determinant expressions det(A_t + B_t C), and certified nonvanishing of
exponential-trigonometric functions over all real t."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .expfun import COS, PURE, SIN, ExpPoly
from .matrices import ExactMatrix
from .polynomials import Poly, count_real_roots, isolate_real_roots
from .scalars import ES, ExactScalar
from .symtriple import SymPair


class SpectrumUnsupported(ValueError):
    """Raised when an exact eigenvalue decomposition is unavailable."""


# -- exact complex numbers ---------------------------------------------------

@dataclass(frozen=True)
class Cx:
    re: ExactScalar
    im: ExactScalar

    @staticmethod
    def real(x) -> "Cx":
        return Cx(ES(x), ES(0))

    def __add__(self, o):
        return Cx(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return Cx(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return Cx(-self.re, -self.im)

    def __mul__(self, o):
        return Cx(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    def inv(self) -> "Cx":
        n = self.re * self.re + self.im * self.im
        return Cx(self.re / n, -self.im / n)

    def __eq__(self, o):
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return 0

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()


def _sqrt_cx(mu: Cx) -> Cx:
    """Principal square root (re >= 0) of an exact complex number."""
    if mu.im.is_zero():
        if mu.re.sign() >= 0:
            return Cx(mu.re.sqrt(), ES(0))
        return Cx(ES(0), (-mu.re).sqrt())
    mod = (mu.re * mu.re + mu.im * mu.im).sqrt()
    half = Fraction(1, 2)
    alpha = ((mod + mu.re) * half).sqrt()
    beta = ((mod - mu.re) * half).sqrt()
    if mu.im.sign() < 0:
        beta = -beta
    return Cx(alpha, beta)


# -- eigenvalue nodes ---------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n and d <= 10 ** 6:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _real_root_candidates(p: Poly, N: ExactMatrix) -> list[ExactScalar]:
    cands = [N.rows[i][i] for i in range(N.nrows)]
    if all(c.is_rational() for c in p.coeffs):
        fracs = [c.as_fraction() for c in p.coeffs]
        lcm = 1
        for f in fracs:
            lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
        ints = [int(f * lcm) for f in fracs]
        a0, an = ints[0], ints[-1]
        if a0 == 0:
            cands.append(ES(0))
        else:
            for pnum in _divisors(a0):
                for qden in _divisors(an):
                    cands.append(ES(Fraction(pnum, qden)))
                    cands.append(ES(Fraction(-pnum, qden)))
    return cands


def eigen_nodes(N: ExactMatrix) -> list[tuple[Cx, int]]:
    """Eigenvalues of N with their minimal-polynomial multiplicities.

    Exact for n <= 2 always; for n = 3 a real eigenvalue must be detectable
    (triangular matrix or rational root), otherwise SpectrumUnsupported."""
    n = N.nrows
    p = N.charpoly()

    def minpoly_mult(mu: ExactScalar) -> int:
        shifted = N - ExactMatrix.diag(*([mu] * n))
        prev = n
        power = ExactMatrix.identity(n)
        for k in range(1, n + 1):
            power = power * shifted
            r = power.rank()
            if r == prev:
                return k - 1
            prev = r
        return n

    def pack(mus: list[Cx]) -> list[tuple[Cx, int]]:
        out: list[tuple[Cx, int]] = []
        for mu in mus:
            if any(mu == m for m, _ in out):
                continue
            if mu.im.is_zero():
                out.append((mu, minpoly_mult(mu.re)))
            else:
                out.append((mu, 1))
        return out

    if n == 1:
        return [(Cx(N.rows[0][0], ES(0)), 1)]
    if n == 2:
        tr, det = N.trace(), N.det()
        disc = tr * tr - 4 * det
        half = Fraction(1, 2)
        s = disc.sign()
        if s > 0:
            r = disc.sqrt()
            return pack([Cx((tr + r) * half, ES(0)), Cx((tr - r) * half, ES(0))])
        if s < 0:
            re, im = tr * half, (-disc).sqrt() * half
            return pack([Cx(re, im), Cx(re, -im)])
        return pack([Cx(tr * half, ES(0))])
    if n == 3:
        root = None
        for cand in _real_root_candidates(p, N):
            if p(cand).is_zero():
                root = cand
                break
        if root is None:
            raise SpectrumUnsupported(
                "no exactly-representable eigenvalue found for a 3x3 block")
        q, rem = p.divmod(Poly([-root, 1]))
        assert rem.is_zero()
        b, c = q.coeffs[1], q.coeffs[0]  # t^2 + b t + c
        disc = b * b - 4 * c
        half = Fraction(1, 2)
        s = disc.sign()
        if s >= 0:
            r = disc.sqrt()
            return pack([Cx(root, ES(0)),
                         Cx((-b + r) * half, ES(0)), Cx((-b - r) * half, ES(0))])
        re, im = -b * half, (-disc).sqrt() * half
        return pack([Cx(root, ES(0)), Cx(re, im), Cx(re, -im)])
    raise SpectrumUnsupported(f"exact spectra implemented for n <= 3, got {n}")


# -- the flow -----------------------------------------------------------------

def _cxexp_of(z: Cx) -> tuple[ExpPoly, ExpPoly]:
    """e^{t z} split into real and imaginary ExpPoly parts."""
    if z.im.is_zero():
        return ExpPoly.exp(z.re), ExpPoly([])
    return (ExpPoly.trig(COS, z.im, rate=z.re),
            ExpPoly.trig(SIN, z.im, rate=z.re))


def _tpow(l: int) -> Poly:
    return Poly([0] * l + [1])


def _hermite_exp_coeffs(nodes: list[tuple[Cx, int]]):
    """Coefficients c_k (pairs of ExpPoly) with exp(tW) = sum c_k W^k, from
    Hermite interpolation of e^{t*lambda} on the given nodes."""
    seq: list[Cx] = []
    for z, m in nodes:
        seq.extend([z] * m)
    deg = len(seq)

    def f_val(z: Cx, order: int) -> tuple[ExpPoly, ExpPoly]:
        re, im = _cxexp_of(z)
        if order:
            tp = _tpow(order)
            fac = Fraction(1, math.factorial(order))
            re = ExpPoly([(r, f, k, p * tp * fac) for (r, f, k, p) in re.terms])
            im = ExpPoly([(r, f, k, p * tp * fac) for (r, f, k, p) in im.terms])
        return re, im

    # divided differences
    table: dict[tuple[int, int], tuple[ExpPoly, ExpPoly]] = {}
    for i in range(deg):
        table[(i, i)] = f_val(seq[i], 0)
    for length in range(1, deg):
        for i in range(deg - length):
            j = i + length
            if seq[i] == seq[j]:
                table[(i, j)] = f_val(seq[i], length)
            else:
                hi_re, hi_im = table[(i + 1, j)]
                lo_re, lo_im = table[(i, j - 1)]
                num = (hi_re - lo_re, hi_im - lo_im)
                dz = (seq[j] - seq[i]).inv()
                table[(i, j)] = (num[0] * dz.re - num[1] * dz.im,
                                 num[0] * dz.im + num[1] * dz.re)

    # Horner expansion of the Newton form into monomial coefficients
    coeffs: list[tuple[ExpPoly, ExpPoly]] = [table[(0, deg - 1)]]
    for k in range(deg - 2, -1, -1):
        x = seq[k]
        new = [(ExpPoly([]), ExpPoly([]))] * (len(coeffs) + 1)
        new = [list(c) for c in new]
        for i, (cre, cim) in enumerate(coeffs):
            new[i + 1][0] = new[i + 1][0] + cre
            new[i + 1][1] = new[i + 1][1] + cim
            new[i][0] = new[i][0] - (cre * x.re - cim * x.im)
            new[i][1] = new[i][1] - (cre * x.im + cim * x.re)
        ck, c0 = table[(0, k)], new[0]
        new[0] = [c0[0] + ck[0], c0[1] + ck[1]]
        coeffs = [tuple(c) for c in new]
    return coeffs


@dataclass(frozen=True)
class ExactTime:
    """An exactly-representable group time: t = q*pi or t = log(unit)/rate_unit."""
    kind: str                      # "pi" | "log"
    q: Fraction = Fraction(0)
    unit: Optional[ExactScalar] = None
    rate_unit: Optional[ExactScalar] = None

    @staticmethod
    def zero() -> "ExactTime":
        return ExactTime("pi", Fraction(0))

    @staticmethod
    def pi_multiple(q) -> "ExactTime":
        return ExactTime("pi", Fraction(q))

    @staticmethod
    def log_unit(u: ExactScalar, rate_unit=None) -> "ExactTime":
        return ExactTime("log", unit=u, rate_unit=rate_unit)

    def is_zero(self) -> bool:
        if self.kind == "pi":
            return self.q == 0
        return self.unit == 1

    def to_float(self) -> float:
        if self.kind == "pi":
            return math.pi * float(self.q)
        val = math.log(self.unit.to_float())
        if self.rate_unit is not None:
            val /= self.rate_unit.to_float()
        return val

    def to_json(self):
        if self.kind == "pi":
            return {"pi_multiple": str(self.q)}
        out = {"log_of": str(self.unit)}
        if self.rate_unit is not None and not (self.rate_unit == 1):
            out["rate_unit"] = str(self.rate_unit)
        return out

    def __str__(self):
        if self.kind == "pi":
            return f"{self.q}*pi"
        if self.rate_unit is None or self.rate_unit == 1:
            return f"log({self.unit})"
        return f"log({self.unit})/({self.rate_unit})"


def exppoly_at(e: ExpPoly, time: ExactTime) -> ExactScalar:
    """Exact evaluation at an ExactTime (raises when not exactly evaluable)."""
    if time.kind == "pi":
        return e.at_pi_multiple(time.q).as_scalar()
    return e.at_log(time.unit, time.rate_unit)


@dataclass
class WFlow:
    """The four n x n ExpPoly blocks of exp(tW)."""
    pair: SymPair
    A: tuple
    B: tuple
    C: tuple
    D: tuple
    nodes: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.pair.n

    def block(self, name: str):
        return getattr(self, name)

    def full(self):
        n = self.n
        out = []
        for i in range(n):
            out.append(list(self.A[i]) + list(self.B[i]))
        for i in range(n):
            out.append(list(self.C[i]) + list(self.D[i]))
        return out

    def eval_float(self, t: float):
        return [[e.eval_float(t) for e in row] for row in self.full()]

    def at_pi_multiple(self, q: Fraction):
        return [[e.at_pi_multiple(q) for e in row] for row in self.full()]

    def at_time(self, time: ExactTime) -> ExactMatrix:
        return ExactMatrix([[exppoly_at(e, time) for e in row] for row in self.full()])


def wflow(pair: SymPair) -> WFlow:
    """Exact exp(tW) in closed form via the spectrum of D*D'."""
    n = pair.n
    N = pair.D * pair.Dprime
    w_nodes: list[tuple[Cx, int]] = []
    for mu, m in eigen_nodes(N):
        lam = _sqrt_cx(mu)
        if lam.is_zero():
            raise SpectrumUnsupported("singular product D*D'")
        w_nodes.append((lam, m))
        w_nodes.append((-lam, m))
    coeffs = _hermite_exp_coeffs(w_nodes)

    W = ExactMatrix([[ES(0)] * n + list(pair.Dprime.rows[i]) for i in range(n)]
                    + [list(pair.D.rows[i]) + [ES(0)] * n for i in range(n)])
    size = 2 * n
    acc_re = [[ExpPoly([]) for _ in range(size)] for _ in range(size)]
    acc_im = [[ExpPoly([]) for _ in range(size)] for _ in range(size)]
    power = ExactMatrix.identity(size)
    for k, (cre, cim) in enumerate(coeffs):
        if k:
            power = power * W
        for i in range(size):
            for j in range(size):
                w = power.rows[i][j]
                if w.is_zero():
                    continue
                acc_re[i][j] = acc_re[i][j] + cre * w
                acc_im[i][j] = acc_im[i][j] + cim * w
    for i in range(size):
        for j in range(size):
            if not acc_im[i][j].is_zero():
                raise AssertionError("imaginary residue in exp(tW)")
    A = tuple(tuple(acc_re[i][j] for j in range(n)) for i in range(n))
    B = tuple(tuple(acc_re[i][n + j] for j in range(n)) for i in range(n))
    Cb = tuple(tuple(acc_re[n + i][j] for j in range(n)) for i in range(n))
    Db = tuple(tuple(acc_re[n + i][n + j] for j in range(n)) for i in range(n))
    return WFlow(pair, A, B, Cb, Db, nodes=w_nodes)


def restricted_matrix(flow: WFlow, C: ExactMatrix):
    """A_t + B_t*C as an ExpPoly matrix."""
    n = flow.n
    out = [[flow.A[i][j] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            s = out[i][j]
            for k in range(n):
                if not C.rows[k][j].is_zero():
                    s = s + flow.B[i][k] * C.rows[k][j]
            out[i][j] = s
    return out


def _det_exppoly(M: list[list[ExpPoly]]) -> ExpPoly:
    n = len(M)
    if n == 1:
        return M[0][0]
    acc = ExpPoly([])
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [[M[i][jj] for jj in range(n) if jj != j] for i in range(1, n)]
        term = M[0][j] * _det_exppoly(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def det_expr(flow: WFlow, C: ExactMatrix) -> ExpPoly:
    """Canonical exact determinant of A_t + B_t*C."""
    return _det_exppoly(restricted_matrix(flow, C))


# -- certified nonvanishing ---------------------------------------------------

@dataclass
class Certificate:
    verdict: str                 # "NonVanishing" | "VanishesAt" | "Unknown"
    method: str
    bracket: Optional[tuple[float, float]] = None
    zero_t: Optional[str] = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def nonvanishing(self) -> bool:
        return self.verdict == "NonVanishing"


def _commensurable(vals: list[ExactScalar]):
    """(base, integer multiples) if all values are integer multiples of one
    base; None otherwise."""
    if not vals:
        return None
    base = vals[0]
    ratios = []
    for v in vals:
        q = v / base
        if not q.is_rational():
            return None
        ratios.append(q.as_fraction())
    lcm = 1
    for r in ratios:
        lcm = lcm * r.denominator // math.gcd(lcm, r.denominator)
    base = base / lcm
    return base, [int(r * lcm) for r in ratios]


def _tan_half_polys(mmax: int) -> list[tuple[Poly, Poly]]:
    """(numerator of cos(m*theta), of sin(m*theta)) over (1+z^2)^m in z = tan(theta/2)."""
    out = [(Poly([1]), Poly([0]))]
    c1, s1 = Poly([1, 0, -1]), Poly([0, 2])  # (1-z^2, 2z) over (1+z^2)
    den = Poly([1, 0, 1])
    for m in range(1, mmax + 1):
        cp, sp = out[-1]
        out.append((cp * c1 - sp * s1, sp * c1 + cp * s1))
    # normalize all to the common denominator (1+z^2)^m implicitly: entry m has denom power m
    return out


def _pure_trig_polyform(e: ExpPoly):
    """For a pure trig ExpPoly with commensurable frequencies, returns
    (P, beta, value at theta=pi, M) with e(theta/beta) = P(tan(theta/2))/(1+z^2)^M."""
    freqs = e.freqs()
    com = _commensurable(freqs) if freqs else (ES(1), [])
    if com is None:
        return None
    beta, mults = com
    by_freq = {}
    const = ES(0)
    for (r, f, k, p) in e.terms:
        if k == PURE:
            const = const + p.coeffs[0]
            continue
        idx = next(i for i, fr in enumerate(freqs) if fr == f)
        m = mults[idx]
        key = (m, k)
        by_freq[key] = by_freq.get(key, ES(0)) + p.coeffs[0]
    mmax = max((m for (m, _) in by_freq), default=0)
    tables = _tan_half_polys(mmax)
    den = Poly([1, 0, 1])
    P = Poly([const]) * den ** mmax if not const.is_zero() else Poly([])
    at_pi = const
    for (m, k), coeff in by_freq.items():
        cp, sp = tables[m]
        num = cp if k == COS else sp
        P = P + Poly([coeff]) * num * den ** (mmax - m)
        if k == COS:
            at_pi = at_pi + coeff * ((-1) ** m)
    return P, beta, at_pi, mmax


def _refine_poly_root(P: Poly, a: Fraction, b: Fraction, steps: int = 40):
    """Shrink an isolating interval of a simple root by exact bisection."""
    sa = P(ES(a)).sign()
    if sa == 0:
        return a, b
    for _ in range(steps):
        mid = (a + b) / 2
        sm = P(ES(mid)).sign()
        if sm == 0:
            break
        if sm == sa:
            a = mid
        else:
            b = mid
        if b - a < Fraction(1, 10 ** 9):
            break
    return a, b


def _interval_sign(e: ExpPoly, t: float, width: float = 1e-12) -> int:
    iv = e.eval_interval(mpmath.iv.mpf([t - width, t + width]))
    if iv.a > 0:
        return 1
    if iv.b < 0:
        return -1
    return 0


def _refine_bracket(e: ExpPoly, lo: float, hi: float, s_lo: int, steps: int = 60):
    for _ in range(steps):
        mid = (lo + hi) / 2
        s = _interval_sign(e, mid)
        if s == s_lo:
            lo = mid
        elif s == -s_lo:
            hi = mid
        else:
            break
        if hi - lo < 1e-9:
            break
    return lo, hi


def _scan_for_sign_change(e: ExpPoly, ts, method: str) -> Optional[Certificate]:
    prev = None
    for t in ts:
        s = _interval_sign(e, t)
        if s == 0:
            continue
        if prev is not None and s != prev[1]:
            lo, hi = _refine_bracket(e, prev[0], t, prev[1]) if prev[0] < t else \
                tuple(reversed(_refine_bracket(e, t, prev[0], s)))
            return Certificate("VanishesAt", method, bracket=(lo, hi),
                               diagnostics={"sign_left": prev[1], "sign_right": -prev[1]})
        prev = (t, s)
    return None


def certify_nonvanishing(e: ExpPoly, grid_cap: int = 10 ** 6) -> Certificate:
    """Decide whether e(t) != 0 for all real t, with a certificate.

    Decidable fragments: pure trigonometric polynomials (through the half-angle
    substitution and Sturm root isolation), pure real-exponential Laurent
    polynomials (u = e^{mu t} and Sturm over u > 0), and mixed terms with a
    dominant growth profile whose oscillating part can be separated; anything
    else reports Unknown with diagnostics.
    """
    if e.is_zero():
        return Certificate("VanishesAt", "identically-zero", zero_t="0",
                           bracket=None)
    c = e.as_constant()
    if c is not None:
        if c.is_zero():
            return Certificate("VanishesAt", "zero-constant", zero_t="0")
        return Certificate("NonVanishing", "constant",
                           diagnostics={"value": str(c)})

    if e.is_pure_trig():
        form = _pure_trig_polyform(e)
        if form is not None:
            P, beta, at_pi, _ = form
            nroots = 0 if P.is_zero() else count_real_roots(P)
            if P.is_zero():
                # e is the at_pi constant away from z-representable points
                nroots = 0
            if nroots == 0 and not at_pi.is_zero() and not P.is_zero():
                return Certificate("NonVanishing", "trig-sturm",
                                   diagnostics={"period_roots": 0})
            if at_pi.is_zero():
                bf = float((math.pi) / beta.to_float())
                return Certificate("VanishesAt", "trig-sturm",
                                   bracket=None, zero_t=f"pi/{beta}",
                                   diagnostics={"at_theta": "pi"})
            roots = isolate_real_roots(P)
            a, b = _refine_poly_root(P, *roots[0])
            sa, sb = P(ES(a)).sign(), P(ES(b)).sign()
            while sa == 0 or sb == 0:
                a, b = a - Fraction(1, 1000), b + Fraction(1, 1000)
                sa, sb = P(ES(a)).sign(), P(ES(b)).sign()
            bfloat = beta.to_float()
            lo = 2 * math.atan(float(a)) / bfloat
            hi = 2 * math.atan(float(b)) / bfloat
            return Certificate("VanishesAt", "trig-sturm",
                               bracket=(min(lo, hi), max(lo, hi)),
                               diagnostics={"sign_left": sa, "sign_right": sb})
        # incommensurable frequencies: constructive grid search outward from 0
        fmax = max((f.to_float() for f in e.freqs()), default=1.0)
        step = math.pi / (2 * fmax)
        for sign in (1, -1):
            cert = _scan_for_sign_change(
                e, (sign * k * step for k in range(min(grid_cap, 65536))),
                "incommensurable-grid")
            if cert:
                return cert
        return Certificate("Unknown", "incommensurable-grid-exhausted")

    if e.is_pure_exp():
        rates = [r for r in e.rates() if not r.is_zero()]
        if len(e.terms) == 1:
            (r, _, _, p) = e.terms[0]
            if p.degree == 0:
                return Certificate("NonVanishing", "single-exponential")
            roots = isolate_real_roots(p)
            if not roots:
                return Certificate("NonVanishing", "single-exponential-poly")
            a, b = roots[0]
            return Certificate("VanishesAt", "single-exponential-poly",
                               bracket=(float(a), float(b)))
        if all(p.degree == 0 for (_, _, _, p) in e.terms):
            com = _commensurable(rates)
            if com is not None:
                base, mults = com
                mmin = min(mults + [0])
                coeffs = {}
                for (r, _, _, p) in e.terms:
                    m = 0 if r.is_zero() else mults[next(
                        i for i, rr in enumerate(rates) if rr == r)]
                    coeffs[m - mmin] = coeffs.get(m - mmin, ES(0)) + p.coeffs[0]
                top = max(coeffs)
                P = Poly([coeffs.get(i, ES(0)) for i in range(top + 1)])
                roots = [iv for iv in isolate_real_roots(P) if iv[1] > 0]
                roots = [iv for iv in roots
                         if count_real_roots(P, ES(max(iv[0], Fraction(0))), ES(iv[1])) == 1]
                if not roots:
                    return Certificate("NonVanishing", "exp-laurent-sturm",
                                       diagnostics={"positive_u_roots": 0})
                a, b = _refine_poly_root(P, max(roots[0][0], Fraction(0)), roots[0][1])
                bfl = base.to_float()
                lo = math.log(float(max(a, Fraction(1, 10 ** 9)))) / bfl
                hi = math.log(float(b)) / bfl
                return Certificate("VanishesAt", "exp-laurent-sturm",
                                   bracket=(min(lo, hi), max(lo, hi)))
    return _certify_mixed(e, grid_cap)


def _dominant_profile(e: ExpPoly, direction: int):
    """(rate, degree, trig profile g) controlling e as t -> direction*inf."""
    rates = e.rates()
    key_rate = max(rates, key=lambda r: direction * r.to_float())
    sub = [(r, f, k, p) for (r, f, k, p) in e.terms if r == key_rate]
    dmax = max(p.degree for (_, _, _, p) in sub)
    terms = []
    for (r, f, k, p) in sub:
        if p.degree == dmax:
            c = p.coeffs[dmax]
            if direction < 0 and dmax % 2 == 1:
                c = -c
            terms.append((ES(0), f, k, Poly([c])))
    return key_rate, dmax, ExpPoly(terms)


def _trig_sign_behavior(g: ExpPoly):
    """('sign', s) if g is one-signed and bounded away from 0; ('changes',
    (theta_pos, theta_neg)) if it strictly changes sign; None if unresolved."""
    c = g.as_constant()
    if c is not None:
        s = c.sign()
        return ("sign", s) if s else None
    form = _pure_trig_polyform(g)
    if form is None:
        # sample for a sign change; incommensurable one-signed never certified
        fmax = max(f.to_float() for f in g.freqs())
        step = math.pi / (3 * fmax)
        prev = None
        for k in range(0, 4096):
            s = _interval_sign(g, k * step)
            if s == 0:
                continue
            if prev is not None and s != prev[1]:
                return ("changes", (prev[0], k * step) if prev[1] > 0 else (k * step, prev[0]))
            prev = (k * step, s)
        return None
    P, beta, at_pi, _ = form
    nroots = 0 if P.is_zero() else count_real_roots(P)
    if nroots == 0 and not at_pi.is_zero():
        return ("sign", at_pi.sign())
    # has a strict sign change in (simple roots of the squarefree form)
    bfl = beta.to_float()
    tpos = tneg = None
    probes = [Fraction(k, 16) for k in range(-64, 65)]
    for z in probes:
        s = P(ES(z)).sign()
        th = 2 * math.atan(float(z)) / bfl
        if s > 0 and tpos is None:
            tpos = th
        if s < 0 and tneg is None:
            tneg = th
        if tpos is not None and tneg is not None:
            return ("changes", (tpos, tneg))
    if at_pi.sign() > 0 and tneg is not None:
        return ("changes", (math.pi / bfl, tneg))
    if at_pi.sign() < 0 and tpos is not None:
        return ("changes", (tpos, math.pi / bfl))
    return None


def _certify_mixed(e: ExpPoly, grid_cap: int) -> Certificate:
    behaviors = {}
    for direction in (1, -1):
        rate, deg, g = _dominant_profile(e, direction)
        behaviors[direction] = (rate, deg, g, _trig_sign_behavior(g))

    # an oscillating dominant profile forces zeros at that end
    for direction in (1, -1):
        rate, deg, g, beh = behaviors[direction]
        if beh is not None and beh[0] == "changes":
            tpos, tneg = beh[1]
            period = 2 * math.pi / max((f.to_float() for f in g.freqs()), default=1.0)
            for k in range(1, min(grid_cap, 8192)):
                base = direction * k * max(period, 1.0)
                s1 = _interval_sign(e, base + tpos)
                s2 = _interval_sign(e, base + tneg)
                if s1 > 0 and s2 < 0:
                    a, b = sorted((base + tpos, base + tneg))
                    lo, hi = _refine_bracket(e, a, b, _interval_sign(e, a))
                    return Certificate("VanishesAt", "dominant-oscillation",
                                       bracket=(lo, hi),
                                       diagnostics={"direction": direction})
            return Certificate("Unknown", "dominant-oscillation-not-located")

    bp = behaviors[1][3]
    bm = behaviors[-1][3]
    if bp is None or bm is None:
        return Certificate("Unknown", "unresolved-asymptotics")
    sp, sm = bp[1], bm[1]
    if sp != sm:
        cert = _scan_for_sign_change(
            e, [d * k for k in range(0, 512) for d in ((1, -1) if k else (1,))],
            "asymptotic-ivt")
        if cert:
            return cert
        return Certificate("Unknown", "asymptotic-ivt-not-located")
    # same eventual sign at both ends: certify the compact window
    return _certify_compact(e, sp, behaviors, grid_cap)


def _tail_bound_T(e: ExpPoly, behaviors) -> Optional[float]:
    """T such that for |t| >= T the dominant profile controls the sign."""
    out = 1.0
    for direction in (1, -1):
        rate, deg, g, beh = behaviors[direction]
        # certified positive lower bound for |g| over one period
        m = _trig_lower_bound(g)
        if m is None or m <= 0:
            return None
        total_T = 1.0
        for (r, f, k, p) in e.terms:
            if r == rate and p.degree == deg:
                continue
            gap = direction * (rate - r).to_float()
            ddeg = deg - p.degree
            if gap < -1e-15:
                return None
            coeff = sum(abs(c.to_float()) for c in p.coeffs)
            T = 2.0
            ok = False
            for _ in range(60):
                lead = coeff * (T ** (-ddeg)) * math.exp(-gap * T) * (len(e.terms))
                if gap == 0 and ddeg <= 0:
                    break
                if lead < m / (2 * len(e.terms)):
                    ok = True
                    break
                T *= 2
            if not ok:
                return None
            total_T = max(total_T, T, (p.degree + deg + 1) / gap if gap > 0 else T)
        out = max(out, total_T)
    return out


def _trig_lower_bound(g: ExpPoly) -> Optional[float]:
    c = g.as_constant()
    if c is not None:
        return abs(c.to_float())
    fmax = max(f.to_float() for f in g.freqs())
    period = 2 * math.pi / fmax
    lo = None
    K = 512
    for k in range(K):
        t0, t1 = k * period * 8 / K, (k + 1) * period * 8 / K
        iv = g.eval_interval(mpmath.iv.mpf([t0, t1]))
        mag = min(abs(float(iv.a)), abs(float(iv.b)))
        if float(iv.a) <= 0 <= float(iv.b):
            return None
        lo = mag if lo is None else min(lo, mag)
    return lo


def _certify_compact(e: ExpPoly, overall_sign: int, behaviors, grid_cap: int) -> Certificate:
    T = _tail_bound_T(e, behaviors)
    if T is None:
        return Certificate("Unknown", "tail-bound-unavailable")
    stack = [(-T, T)]
    work = 0
    while stack:
        a, b = stack.pop()
        work += 1
        if work > 20000:
            return Certificate("Unknown", "subdivision-budget-exhausted")
        iv = e.eval_interval(mpmath.iv.mpf([a, b]))
        if iv.a > 0 or iv.b < 0:
            continue
        sa, sb = _interval_sign(e, a), _interval_sign(e, b)
        if sa and sb and sa != sb:
            lo, hi = _refine_bracket(e, a, b, sa)
            return Certificate("VanishesAt", "compact-subdivision", bracket=(lo, hi))
        if b - a < 1e-7:
            return Certificate("Unknown", "unresolved-interval",
                               diagnostics={"interval": (a, b)})
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    return Certificate("NonVanishing", "asymptotic-plus-subdivision",
                       diagnostics={"window": T, "sign": overall_sign})
