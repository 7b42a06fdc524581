"""The solvable metric Lie algebras built from a pair of symmetric invertible
matrices: construction, symmetric-triple verification, complete solvability,
equivalence of pairs and the n = 2 normal forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .matrices import (DimensionError, ExactMatrix, NotSymmetricError,
                       SignaturePair, SingularError, congruence_diagonalize,
                       signature)
from .polynomials import count_real_roots
from .scalars import ES, ExactScalar


@dataclass(frozen=True)
class SymPair:
    """The defining data (n, D, D') with D, D' symmetric and invertible."""
    D: ExactMatrix
    Dprime: ExactMatrix

    def __post_init__(self):
        for name, M in (("D", self.D), ("Dprime", self.Dprime)):
            if not M.is_symmetric():
                raise NotSymmetricError(f"{name} must be symmetric")
            if not M.is_invertible():
                raise SingularError(f"{name} must be invertible")
        if self.D.nrows != self.Dprime.nrows:
            raise DimensionError("D and D' must have equal size")

    @property
    def n(self) -> int:
        return self.D.nrows

    def __eq__(self, other):
        return isinstance(other, SymPair) and self.D == other.D and self.Dprime == other.Dprime

    def __hash__(self):
        return hash(self.n)

    def __str__(self):
        return f"(D={self.D}, D'={self.Dprime})"


def sympair(D_rows, Dprime_rows) -> SymPair:
    return SymPair(ExactMatrix(D_rows), ExactMatrix(Dprime_rows))


class GddAlgebra:
    """Structure constants of the solvable algebra attached to a SymPair.

    Basis order: W, X_1..X_n, Y_1..Y_n, Z.  The involution fixes
    h = span{Y_i} and negates q = RW + span{X_i} + RZ; the inner product
    lives on q with Gram blocks (0,-1 corner / D'^{-1} middle).
    """

    def __init__(self, pair: SymPair):
        n = pair.n
        self.pair = pair
        self.n = n
        self.dim = 2 * n + 2
        self.names = (["W"] + [f"X{i+1}" for i in range(n)]
                      + [f"Y{i+1}" for i in range(n)] + ["Z"])
        self.q_idx = [0] + list(range(1, n + 1)) + [2 * n + 1]
        self.h_idx = list(range(n + 1, 2 * n + 1))
        self.sigma = [1 if i in self.h_idx else -1 for i in range(self.dim)]
        self.table = [[[ES(0)] * self.dim for _ in range(self.dim)]
                      for _ in range(self.dim)]
        D, Dp = pair.D, pair.Dprime
        for i in range(n):
            # [W, X_i] = sum_j D_ji Y_j ; [W, Y_i] = sum_j D'_ji X_j
            for j in range(n):
                self._set(0, 1 + i, n + 1 + j, D.rows[j][i])
                self._set(0, n + 1 + i, 1 + j, Dp.rows[j][i])
            # [X_i, Y_i] = Z
            self._set(1 + i, n + 1 + i, 2 * n + 1, ES(1))
        dpi = Dp.inverse()
        m = n + 2
        gram = [[ES(0)] * m for _ in range(m)]
        gram[0][m - 1] = ES(-1)
        gram[m - 1][0] = ES(-1)
        for i in range(n):
            for j in range(n):
                gram[1 + i][1 + j] = dpi.rows[i][j]
        self.gram_q = ExactMatrix(gram)

    def _set(self, i: int, j: int, k: int, c: ExactScalar):
        self.table[i][j][k] = self.table[i][j][k] + c
        self.table[j][i][k] = self.table[j][i][k] - c

    def bracket(self, u, v) -> list[ExactScalar]:
        out = [ES(0)] * self.dim
        for i, a in enumerate(u):
            if a.is_zero():
                continue
            for j, b in enumerate(v):
                if b.is_zero():
                    continue
                coeffs = self.table[i][j]
                f = a * b
                for k in range(self.dim):
                    if not coeffs[k].is_zero():
                        out[k] = out[k] + f * coeffs[k]
        return out

    def basis_vector(self, i: int) -> list[ExactScalar]:
        return [ES(1) if j == i else ES(0) for j in range(self.dim)]

    def zero_bracket(self, i: int, j: int) -> "GddAlgebra":
        """Copy with [e_i, e_j] forced to zero (for mutation tests)."""
        import copy
        other = copy.copy(self)
        other.table = [[list(v) for v in row] for row in self.table]
        other.table[i][j] = [ES(0)] * self.dim
        other.table[j][i] = [ES(0)] * self.dim
        return other


def build_gdd(pair: SymPair) -> GddAlgebra:
    return GddAlgebra(pair)


@dataclass
class TripleReport:
    valid: bool
    space_signature: SignaturePair
    completely_solvable: bool
    failures: list[str] = field(default_factory=list)


def verify_triple(alg: GddAlgebra) -> TripleReport:
    """Check the symmetric-triple axioms on an algebra's structure constants."""
    failures = []
    dim = alg.dim

    def is_zero_vec(v):
        return all(c.is_zero() for c in v)

    # Jacobi identity on all basis triples
    jacobi_ok = True
    for i in range(dim):
        for j in range(i + 1, dim):
            bij = alg.table[i][j]
            for k in range(j + 1, dim):
                v1 = alg.bracket(bij, alg.basis_vector(k))
                v2 = alg.bracket(alg.table[j][k], alg.basis_vector(i))
                v3 = alg.bracket(alg.table[k][i], alg.basis_vector(j))
                if not is_zero_vec([a + b + c for a, b, c in zip(v1, v2, v3)]):
                    jacobi_ok = False
    if not jacobi_ok:
        failures.append("jacobi")

    # [q,q] = h and h abelian
    span_rows = []
    for a in alg.q_idx:
        for b in alg.q_idx:
            if a < b:
                span_rows.append(alg.table[a][b])
    span = ExactMatrix(span_rows) if span_rows else ExactMatrix.zero(1, dim)
    h_rows = ExactMatrix([alg.basis_vector(i) for i in alg.h_idx])
    same_span = (span.rank() == len(alg.h_idx)
                 and ExactMatrix(list(span.rows) + list(h_rows.rows)).rank() == len(alg.h_idx))
    if not same_span:
        failures.append("[q,q] != h")
    for a in alg.h_idx:
        for b in alg.h_idx:
            if not is_zero_vec(alg.table[a][b]):
                failures.append("h not abelian")
                break

    # sigma is an automorphism: sigma[x,y] = [sigma x, sigma y]
    sig_ok = True
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(dim):
                lhs = alg.table[i][j][k] * alg.sigma[k]
                rhs = alg.table[i][j][k] * alg.sigma[i] * alg.sigma[j]
                if not (lhs - rhs).is_zero():
                    sig_ok = False
    if not sig_ok:
        failures.append("sigma not an automorphism")

    # ad(h)-invariance of the inner product: gram*ad(v) skew on q
    q = alg.q_idx
    m = len(q)
    for hv in alg.h_idx:
        ad = [[alg.table[hv][q[j]][q[i]] for j in range(m)] for i in range(m)]
        gm = alg.gram_q * ExactMatrix(ad)
        if not (gm + gm.T) == ExactMatrix.zero(m):
            failures.append("inner product not ad(h)-invariant")
            break

    sig = signature(alg.gram_q)
    return TripleReport(valid=not failures, space_signature=sig,
                        completely_solvable=is_completely_solvable(alg.pair),
                        failures=failures)


def is_completely_solvable(pair: SymPair) -> bool:
    """True iff every eigenvalue of D*D' is a positive real number."""
    p = (pair.D * pair.Dprime).charpoly().squarefree_part()
    total = count_real_roots(p)
    if total != p.degree:
        return False
    return count_real_roots(p, ES(0), None) == p.degree


@dataclass(frozen=True)
class Witness:
    """Exact equivalence witness: P*D'_a*P^T = D'_b and k^2*P^T*D_b*P = D_a."""
    P: ExactMatrix
    k: ExactScalar

    def check(self, a: SymPair, b: SymPair) -> bool:
        return (self.P * a.Dprime * self.P.T == b.Dprime
                and (self.k * self.k) * (self.P.T * b.D * self.P) == a.D)

    def inverse(self) -> "Witness":
        return Witness(self.P.inverse(), ES(1) / self.k)


def compose_to(via_a: Witness, via_b: Witness) -> Witness:
    """From witnesses a->r and b->r build the witness a->b."""
    return Witness(via_b.P.inverse() * via_a.P, via_a.k / via_b.k)


def _chain(first: Witness, then: Witness) -> Witness:
    """Witness for the composite transform a->cur->new."""
    return Witness(then.P * first.P, then.k * first.k)


def _apply(pair: SymPair, P: ExactMatrix, k: ExactScalar) -> SymPair:
    Pinv = P.inverse()
    k2inv = ES(1) / (k * k)
    return SymPair(k2inv * (Pinv.T * pair.D * Pinv), P * pair.Dprime * P.T)


@dataclass
class _Reduced:
    tag: str                    # DistinctReal | Imaginary | RepeatedDiag | RepeatedNonDiag | DefiniteDprime
    pair: SymPair               # canonical reduced pair
    witness: Witness            # input -> reduced
    params: dict


def _hyperbolic_from_cosh2(c2: ExactScalar, s2: ExactScalar) -> ExactMatrix:
    """H = [[cosh s, sinh s],[sinh s, cosh s]] from cosh 2s, sinh 2s."""
    half = Fraction(1, 2)
    ch = ((c2 + 1) * half).sqrt()
    sh = ((c2 - 1) * half).sqrt()
    if s2.sign() < 0:
        sh = -sh
    return ExactMatrix([[ch, sh], [sh, ch]])


def _reduce_indefinite(pair: SymPair) -> _Reduced:
    """Reduce a sig-(1,1) pair to its canonical form over D' = I_{1,1}."""
    wit = Witness(ExactMatrix.identity(2), ES(1))
    cur = pair

    def step(P: ExactMatrix, k=1):
        nonlocal cur, wit
        k = ES(k)
        cur = _apply(cur, P, k)
        wit = _chain(wit, Witness(P, k))

    # bring D' to I_{1,1}
    P0, diag = congruence_diagonalize(pair.Dprime)
    l1, l2 = diag.rows[0][0], diag.rows[1][1]
    if l1.sign() < 0:
        P0 = ExactMatrix([[0, 1], [1, 0]]) * P0
        l1, l2 = l2, l1
    scale = ExactMatrix.diag(ES(1) / l1.sqrt(), ES(1) / (-l2).sqrt())
    step(scale * P0)
    # force nonnegative off-diagonal entry
    if cur.D.rows[0][1].sign() < 0:
        step(ExactMatrix.diag(1, -1))
    x, y, z = cur.D.rows[0][0], cur.D.rows[0][1], cur.D.rows[1][1]
    half = Fraction(1, 2)
    w, c = (x + z) * half, (x - z) * half
    gap = (w * w - y * y).sign()

    if gap > 0:
        # distinct real spectrum: remove the off-diagonal part
        if y.sign() != 0:
            root = (w * w - y * y).sqrt()
            c2 = abs(w) / root
            s2 = y * (1 if w.sign() > 0 else -1) / root
            H = _hyperbolic_from_cosh2(c2, s2)
            # the transform acts by inverse-transpose on D; solve on the result
            step(H.inverse().T if not _kills_offdiag(cur, H) else H)
        d1, d2 = cur.D.rows[0][0], cur.D.rows[1][1]
        step(ExactMatrix.identity(2), k=abs(d1).sqrt())
        d1, d2 = cur.D.rows[0][0], cur.D.rows[1][1]
        return _Reduced("DistinctReal", cur, wit,
                        {"s1": d1.sign(), "s2": d2.sign(), "mu": abs(d2)})
    if gap < 0:
        # imaginary spectrum: remove the diagonal trace part
        root = (y * y - w * w).sqrt()
        c2 = y / root
        s2 = w / root
        H = _hyperbolic_from_cosh2(c2, s2)
        step(H if _kills_trace(cur, H) else H.inverse().T)
        if cur.D.rows[0][1].sign() < 0:
            step(ExactMatrix.diag(1, -1))
        d = cur.D.rows[0][1]
        step(ExactMatrix.identity(2), k=d.sqrt())
        return _Reduced("Imaginary", cur, wit, {"chat": cur.D.rows[0][0]})
    # repeated spectrum
    if y.is_zero():
        step(ExactMatrix.identity(2), k=abs(c).sqrt())
        return _Reduced("RepeatedDiag", cur, wit, {"sign": c.sign()})
    # Jordan case: scale (w, y) against c with a hyperbolic flow, then globally
    s = (w / y).sign()  # w = s*y with s = +-1
    cq = abs(c) / y
    c2 = (cq + 1 / cq) * half
    s2 = (cq - 1 / cq) * half * s
    H = _hyperbolic_from_cosh2(c2, s2)
    stepped = _apply(cur, H, ES(1))
    if not _jordan_balanced(stepped):
        H = H.inverse().T
    step(H)
    yy = cur.D.rows[0][1]
    step(ExactMatrix.identity(2), k=yy.sqrt())
    return _Reduced("RepeatedNonDiag", cur, wit,
                    {"s": s, "csign": ((cur.D.rows[0][0] - cur.D.rows[1][1]) * half).sign()})


def _kills_offdiag(pair: SymPair, H: ExactMatrix) -> bool:
    return _apply(pair, H, ES(1)).D.rows[0][1].is_zero()


def _kills_trace(pair: SymPair, H: ExactMatrix) -> bool:
    newd = _apply(pair, H, ES(1)).D
    return (newd.rows[0][0] + newd.rows[1][1]).is_zero()


def _jordan_balanced(pair: SymPair) -> bool:
    x, y, z = pair.D.rows[0][0], pair.D.rows[0][1], pair.D.rows[1][1]
    half = Fraction(1, 2)
    return (abs((x + z) * half) == y) and (abs((x - z) * half) == y)


def _reduce_definite(pair: SymPair) -> _Reduced:
    """Outside-lemma reduction for definite D' (n = 2): orthogonal eigenbasis."""
    wit = Witness(ExactMatrix.identity(2), ES(1))
    cur = pair

    def step(P, k=1):
        nonlocal cur, wit
        k = ES(k)
        cur = _apply(cur, P, k)
        wit = _chain(wit, Witness(P, k))

    eps = 1 if signature(pair.Dprime).p == 2 else -1
    P0, diag = congruence_diagonalize(pair.Dprime)
    scale = ExactMatrix.diag(ES(1) / abs(diag.rows[0][0]).sqrt(),
                             ES(1) / abs(diag.rows[1][1]).sqrt())
    step(scale * P0)
    x, y, z = cur.D.rows[0][0], cur.D.rows[0][1], cur.D.rows[1][1]
    if not y.is_zero():
        # rotate to principal axes; rotations preserve +-I_2
        h = ((x - z) * (x - z) + 4 * y * y).sqrt()
        c2 = (x - z) / h
        half = Fraction(1, 2)
        co = ((1 + c2) * half).sqrt()
        si = ((1 - c2) * half).sqrt()
        if y.sign() < 0:
            si = -si
        R = ExactMatrix([[co, si], [-si, co]])
        if not _apply(cur, R, ES(1)).D.rows[0][1].is_zero():
            R = R.T
        step(R)
    d1, d2 = cur.D.rows[0][0], cur.D.rows[1][1]
    if d1 < d2:
        step(ExactMatrix([[0, 1], [1, 0]]))
        d1, d2 = d2, d1
    step(ExactMatrix.identity(2), k=abs(d1).sqrt())
    return _Reduced("DefiniteDprime", cur, wit, {"eps": eps})


def _reduce(pair: SymPair) -> _Reduced:
    if pair.n != 2:
        raise DimensionError("normal forms are implemented for n = 2")
    sig = signature(pair.Dprime)
    if sig.as_tuple() == (1, 1):
        return _reduce_indefinite(pair)
    return _reduce_definite(pair)


@dataclass
class NormalForm:
    tag: str
    params: dict
    representative: SymPair
    witness: Witness  # input -> representative
    outside_lemma: bool = False


_S = ExactMatrix([[0, 1], [1, 0]])


def _candidate_representatives(red: _Reduced) -> list[SymPair]:
    if red.tag == "DistinctReal":
        nu = red.params["mu"].sqrt()
        return [SymPair(ExactMatrix.diag(red.params["s1"], red.params["s2"] * nu),
                        ExactMatrix.diag(1, -nu))]
    if red.tag == "Imaginary":
        chat = red.params["chat"]
        nu = -chat + (chat * chat + 1).sqrt()
        return [SymPair(ExactMatrix([[nu, 1], [1, -nu]]),
                        ExactMatrix([[-nu, 1], [1, nu]]))]
    if red.tag == "RepeatedDiag":
        sgn = red.params["sign"]
        return [SymPair(sgn * ExactMatrix.diag(1, -1), ExactMatrix.diag(1, -1))]
    if red.tag == "RepeatedNonDiag":
        out = []
        for a in (2, -2):
            for sprime in (1, -1):
                out.append(SymPair(ExactMatrix([[a, -1], [-1, 0]]), sprime * _S))
        return out
    return [red.pair]


def normal_form(pair: SymPair) -> NormalForm:
    """Canonical class representative of a 2x2 pair with an exact witness."""
    red = _reduce(pair)
    for rep in _candidate_representatives(red):
        red_rep = _reduce(rep)
        if red_rep.tag == red.tag and red_rep.pair == red.pair:
            wit = compose_to(red.witness, red_rep.witness)
            assert wit.check(pair, rep)
            params = dict(red.params)
            if red.tag == "DistinctReal":
                params["nu"] = params.pop("mu").sqrt()
            if red.tag == "Imaginary":
                chat = params.pop("chat")
                params["nu"] = -chat + (chat * chat + 1).sqrt()
            return NormalForm(red.tag, params, rep, wit,
                              outside_lemma=(red.tag == "DefiniteDprime"))
    raise RuntimeError(f"no representative matched the reduction of {pair}")


def equivalent(a: SymPair, b: SymPair) -> Optional[Witness]:
    """Exact witness that the pairs are isomorphic, or None (full decision
    for n = 2; larger n raises)."""
    if a.n != b.n:
        return None
    if a.n != 2:
        raise DimensionError("full equivalence decision only implemented for n = 2")
    ra, rb = _reduce(a), _reduce(b)
    if ra.tag != rb.tag or ra.pair != rb.pair:
        return None
    wit = compose_to(ra.witness, rb.witness)
    assert wit.check(a, b)
    return wit
