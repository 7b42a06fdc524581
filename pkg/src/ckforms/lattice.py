"""Exact Heisenberg group arithmetic, invariant uniform lattices from
integer-characteristic-polynomial matrices, and properness cross-checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .expfun import ExpPoly
from .flow import (Certificate, ExactTime, WFlow, _det_exppoly, certify_nonvanishing,
                   det_expr, exppoly_at, restricted_matrix, wflow)
from .matrices import ExactMatrix
from .polynomials import Poly, count_real_roots
from .scalars import ES, ExactScalar
from .symtriple import SymPair


class NonIntegerCharpoly(ValueError):
    pass


class NoCyclicVector(ValueError):
    pass


class InvarianceFails(ValueError):
    pass


class NotLattice(ValueError):
    pass


@dataclass(frozen=True)
class HeisenbergElement:
    """Group element (v, z) with product (v,z)(v',z') = (v+v', z+z'+w(v,v')/2)."""
    v: tuple
    z: ExactScalar

    @staticmethod
    def of(v: Sequence, z=0) -> "HeisenbergElement":
        return HeisenbergElement(tuple(ES(x) for x in v), ES(z))

    @property
    def n(self) -> int:
        return len(self.v) // 2

    def __eq__(self, other):
        return (len(self.v) == len(other.v) and self.z == other.z
                and all(a == b for a, b in zip(self.v, other.v)))

    def __hash__(self):
        return hash(len(self.v))

    def __str__(self):
        return f"({', '.join(str(x) for x in self.v)}; z={self.z})"


def symplectic_form(v1: Sequence, v2: Sequence) -> ExactScalar:
    """The standard symplectic pairing on span{X_i, Y_i}."""
    n = len(v1) // 2
    acc = ES(0)
    for i in range(n):
        acc = acc + v1[i] * v2[n + i] - v1[n + i] * v2[i]
    return acc


def bch_mul(a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    """Exact 2-step product of Heisenberg group elements."""
    if len(a.v) != len(b.v):
        raise ValueError("dimension mismatch")
    v = tuple(x + y for x, y in zip(a.v, b.v))
    z = a.z + b.z + symplectic_form(a.v, b.v) * Fraction(1, 2)
    return HeisenbergElement(v, z)


def bch_inv(a: HeisenbergElement) -> HeisenbergElement:
    return HeisenbergElement(tuple(-x for x in a.v), -a.z)


def bch_commutator(a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    return bch_mul(bch_mul(a, b), bch_inv(bch_mul(b, a)))


@dataclass(frozen=True)
class GroupElement:
    """(t, h) in the semidirect product: t acts on v-coordinates by W_t."""
    t: ExactTime
    h: HeisenbergElement

    def to_json(self):
        return {"t": self.t.to_json(),
                "v": [str(x) for x in self.h.v], "z": str(self.h.z)}


def group_mul(flow: WFlow, a: GroupElement, b: GroupElement) -> GroupElement:
    """Product in R x| H_n; both times must be exactly evaluable and compatible."""
    Wt = flow.at_time(a.t)
    moved = HeisenbergElement(tuple(Wt.apply(list(b.h.v))), b.h.z)
    if a.t.kind == "pi" and b.t.kind == "pi":
        t = ExactTime.pi_multiple(a.t.q + b.t.q)
    elif a.t.kind == "log" and b.t.kind == "log" and a.t.rate_unit == b.t.rate_unit:
        t = ExactTime.log_unit(a.t.unit * b.t.unit, a.t.rate_unit)
    else:
        raise ValueError("incompatible exact times")
    return GroupElement(t, bch_mul(a.h, moved))


def ad_inner(flow: WFlow, t: ExactTime, h: HeisenbergElement) -> HeisenbergElement:
    """Conjugation of (0, h) by (t, e): v-part moves by W_t, the center is fixed."""
    Wt = flow.at_time(t)
    return HeisenbergElement(tuple(Wt.apply(list(h.v))), h.z)


@dataclass
class LatticeWitness:
    M: ExactMatrix
    v: tuple
    basis: list
    charpoly_ints: list[int]
    invariance: str  # "MG subset G" | "MG = G"

    def to_json(self):
        return {"cyclic_vector": [str(x) for x in self.v],
                "basis": [[str(x) for x in b] for b in self.basis],
                "charpoly": self.charpoly_ints,
                "invariance": self.invariance}


def _integer_vectors(n: int, bound: int):
    order = [0]
    for k in range(1, bound + 1):
        order.extend([k, -k])
    for tail in itertools.product(order, repeat=n - 1):
        for lead in order:
            yield (lead,) + tail


def integer_charpoly_lattice(M: ExactMatrix, bound: int = 5) -> LatticeWitness:
    """Invariant full-rank lattice from an integer characteristic polynomial.

    Needs real, pairwise distinct eigenvalues; the cyclic vector is the first
    integer vector (max-norm <= bound) whose Krylov family is independent.
    """
    p = M.charpoly()
    ints = p.to_int_coeffs()
    if ints is None:
        raise NonIntegerCharpoly(f"characteristic polynomial {p} is not integral")
    sf = p.squarefree_part()
    n = M.nrows
    if sf.degree != n or count_real_roots(sf) != n:
        raise NoCyclicVector("eigenvalues are not real and pairwise distinct")
    for cand in _integer_vectors(n, bound):
        if all(c == 0 for c in cand):
            continue
        vecs = [[ES(c) for c in cand]]
        for _ in range(n - 1):
            vecs.append(M.apply(vecs[-1]))
        if not ExactMatrix(vecs).det().is_zero():
            inv = "MG = G" if abs(ints[0]) == 1 else "MG subset G"
            return LatticeWitness(M, tuple(ES(c) for c in cand), vecs, ints, inv)
    raise NoCyclicVector(f"no cyclic vector with max-norm <= {bound}")


@dataclass
class GroupLattice:
    """A verified uniform lattice Gamma_0 in L_C together with the Ad_l action."""
    kind: str                       # "abelian" | "heisenberg"
    t0: ExactTime
    ad_matrix: ExactMatrix          # action of Ad_l on the chosen lattice basis
    charpoly_ints: list[int]
    generators: list[GroupElement]
    witness: Optional[LatticeWitness] = None
    notes: dict = field(default_factory=dict)

    def to_json(self):
        out = {"kind": self.kind, "t0": self.t0.to_json(),
               "charpoly": self.charpoly_ints,
               "generators": [g.to_json() for g in self.generators],
               "notes": self.notes}
        if self.witness is not None:
            out["lattice"] = self.witness.to_json()
        return out


def _graph_basis(C: ExactMatrix) -> list[list[ExactScalar]]:
    n = C.nrows
    cols = []
    for i in range(n):
        col = [ES(0)] * (2 * n)
        col[i] = ES(1)
        for j in range(n):
            col[n + j] = C.rows[j][i]
        cols.append(col)
    return cols


def build_group_lattice(pair: SymPair, C: ExactMatrix, w: Sequence,
                        t0: ExactTime, flow: Optional[WFlow] = None) -> GroupLattice:
    """Ad_l-invariant uniform lattice in L_C for l = (t0, e), verified exactly."""
    fl = flow if flow is not None else wflow(pair)
    n = pair.n
    R = ExactMatrix([[exppoly_at(e, t0) for e in row]
                     for row in restricted_matrix(fl, C)])
    lower = [[exppoly_at(fl.C[i][j], t0)
              + sum((exppoly_at(fl.D[i][k], t0) * C.rows[k][j] for k in range(n)), ES(0))
              for j in range(n)] for i in range(n)]
    if ExactMatrix(lower) != C * R:
        raise InvarianceFails("graph subspace is not invariant at t0")
    k2 = (C - C.T).rank()
    if k2 == 0:
        ext = [[R.rows[i][j] if i < n and j < n else
                (ES(1) if i == j else ES(0)) for j in range(n + 1)]
               for i in range(n + 1)]
        E = ExactMatrix(ext)
        try:
            witness = integer_charpoly_lattice(E)
            basis_vecs = witness.basis
            charpoly_ints = witness.charpoly_ints
        except NoCyclicVector:
            ints = E.charpoly().to_int_coeffs()
            if ints is None or not all(
                    E.rows[i][j].is_integer() for i in range(n + 1) for j in range(n + 1)):
                raise NotLattice("no invariant lattice construction applies")
            if abs(ints[0]) != 1:
                raise NotLattice("integer action is not unimodular")
            witness = None
            basis_vecs = [[ES(1) if i == j else ES(0) for j in range(n + 1)]
                          for i in range(n + 1)]
            charpoly_ints = ints
        graph = _graph_basis(C)
        gens = []
        for b in basis_vecs:
            v = [sum((graph[i][c] * b[i] for i in range(n)), ES(0))
                 for c in range(2 * n)]
            gens.append(GroupElement(ExactTime.zero(),
                                     HeisenbergElement(tuple(v), b[n])))
        return GroupLattice("abelian", t0, E, charpoly_ints, gens, witness=witness,
                            notes={"rank_C_minus_CT": 0})
    # Heisenberg-like: integer points of the graph basis with half-center
    if not all(x.is_integer() for row in C.rows for x in row):
        raise NotLattice("integer-point lattice needs an integer C")
    if not all(x.is_integer() for row in R.rows for x in row):
        raise InvarianceFails("Ad_l does not preserve the integer lattice")
    ints = ExactMatrix(
        [[R.rows[i][j] for j in range(n)] for i in range(n)]).charpoly().to_int_coeffs()
    det = R.det()
    if not (det == 1 or det == -1):
        raise InvarianceFails("Ad_l is not unimodular on the graph lattice")
    graph = _graph_basis(C)
    gens = [GroupElement(ExactTime.zero(), HeisenbergElement(tuple(col), ES(0)))
            for col in graph]
    gens.append(GroupElement(ExactTime.zero(),
                             HeisenbergElement(tuple([ES(0)] * (2 * n)),
                                               ES(Fraction(1, 2)))))
    # closure of generator commutators in the half-integer center
    for a in gens:
        for b in gens:
            comm = bch_commutator(a.h, b.h)
            if not all(x.is_zero() for x in comm.v):
                raise NotLattice("commutators leave the graph span")
            if not (comm.z * 2).is_integer():
                raise NotLattice("commutators escape the half-integer center")
    full = ints + [1] if ints else None
    ext_char = ExactMatrix([[R.rows[i][j] if i < n and j < n else
                             (ES(1) if i == j else ES(0)) for j in range(n + 1)]
                            for i in range(n + 1)]).charpoly().to_int_coeffs()
    return GroupLattice("heisenberg", t0, R, ext_char, gens,
                        notes={"rank_C_minus_CT": k2,
                               "center_convention": "half-integer refinement"})


def ci_check(pair: SymPair, C_or_subspace: Union[ExactMatrix, Sequence],
             samples: Sequence[ExactTime] = (), flow: Optional[WFlow] = None) -> bool:
    """Exact check that l_C (or a given subspace of h_n) meets Ad_G(h) trivially.

    For a graph matrix C the quantifier over group elements is discharged by
    certifying det(A_t + B_t C) != 0 for all t; sampled exact times
    cross-validate the certificate (any disagreement raises)."""
    fl = flow if flow is not None else wflow(pair)
    n = pair.n
    if isinstance(C_or_subspace, ExactMatrix) and C_or_subspace.nrows == n:
        C = C_or_subspace
        cert = certify_nonvanishing(det_expr(fl, C))
        for t in samples:
            val = exppoly_at(det_expr(fl, C), t)
            if cert.nonvanishing and val.is_zero():
                raise AssertionError("certificate contradicts exact sample")
        return cert.nonvanishing
    vectors = [list(v) for v in C_or_subspace]
    for t in samples:
        Wt = pairflow_at(fl, t)
        h_cols = []
        for j in range(n):
            hv = [ES(0)] * (2 * n)
            hv[n + j] = ES(1)
            h_cols.append(Wt.apply(hv))
        rows = vectors + h_cols
        if ExactMatrix(rows).rank() < len(rows):
            return False
    return True


def pairflow_at(flow: WFlow, t: ExactTime) -> ExactMatrix:
    return flow.at_time(t)


@dataclass
class CrosscheckSample:
    t: ExactTime
    det_nonzero: bool
    direct_sum: bool

    @property
    def agree(self) -> bool:
        return self.det_nonzero == self.direct_sum


@dataclass
class CrosscheckReport:
    samples: list[CrosscheckSample]

    @property
    def ok(self) -> bool:
        return all(s.agree for s in self.samples)


def properness_crosscheck(pair: SymPair, C: ExactMatrix,
                          t_samples: Sequence[ExactTime],
                          flow: Optional[WFlow] = None) -> CrosscheckReport:
    """Verify that the direct-sum condition l_C + W_t(h) = h_n holds exactly
    when det(A_t + B_t C) != 0, at each sampled exact time."""
    fl = flow if flow is not None else wflow(pair)
    n = pair.n
    d = det_expr(fl, C)
    graph = _graph_basis(C)
    out = []
    for t in t_samples:
        det_val = exppoly_at(d, t)
        Wt = fl.at_time(t)
        cols = []
        for g in graph:
            cols.append(list(g) + [ES(0)])
        cols.append([ES(0)] * (2 * n) + [ES(1)])  # the center direction
        for j in range(n):
            hv = [ES(0)] * (2 * n)
            hv[n + j] = ES(1)
            cols.append(Wt.apply(hv) + [ES(0)])
        big = ExactMatrix(cols)
        out.append(CrosscheckSample(t, not det_val.is_zero(),
                                    big.rank() == 2 * n + 1))
    report = CrosscheckReport(out)
    if not report.ok:
        raise AssertionError("properness equivalence failed at an exact sample")
    return report
