"""Algebraic intersection approximations, their cones and local duality obstructions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .graded import (
    ChainComplex,
    ChainMap,
    ConeModel,
    GradedMap,
    GradedPairing,
    GradedSpace,
    cone_model,
    homology,
    induced_on_homology,
    mapping_cone,
)
from .linalg import Matrix, Subspace, complement_basis, inverse, is_invertible, rank, subspace_annihilator, vstack
from .report import ConsistencyError, PreconditionError, ValidationReport
from .tube import TubeDatum, compute_ZY, dual


@dataclass(frozen=True)
class Approximation:
    """A chain complex A with a map f: A -> B realising B -> Z on homology."""

    perversity: str
    A: ChainComplex
    f: GradedMap

    def __post_init__(self):
        if self.f.source != self.A.space or self.f.shift != 0:
            raise ValueError("f must be a degree-0 map out of the approximating complex")

    @property
    def space(self) -> GradedSpace:
        return self.A.space

    @classmethod
    def from_columns(cls, perversity: str, B: GradedSpace, columns: Mapping[int, Matrix]) -> "Approximation":
        """Zero-differential approximation spanned by the given columns of each B_i."""
        space = GradedSpace.from_function(B.min_degree, B.max_degree,
                                          lambda i: columns[i].cols if i in columns else 0)
        f = GradedMap(space, B, 0, {i: m for i, m in columns.items() if B.min_degree <= i <= B.max_degree})
        return cls(perversity, ChainComplex.zero(space), f)

    def formal(self) -> "Approximation":
        """Replace A by its homology (zero differential) and f by f_*."""
        if self.A.has_zero_differential:
            return self
        h = homology(self.A)
        return Approximation(self.perversity, ChainComplex.zero(h.space), self.f @ h.cycle_section)

    def image(self, i: int) -> Subspace:
        return Subspace.span(self.f.block(i))


def default_approximation(t: TubeDatum, perversity: str) -> Approximation:
    zy = compute_ZY(t, perversity)
    cols = {i: complement_basis(zy.y_in_b(i + 1)) for i in t.B.degrees()}
    return Approximation.from_columns(perversity, t.B, cols)


def check_approximation(t: TubeDatum, a: Approximation) -> ValidationReport:
    report = ValidationReport()
    if a.f.target != t.B:
        report.add("approximation must map into the boundary homology")
        return report
    d = a.A.differential
    for i in a.space.degrees():
        if not (d.block(i - 1) @ d.block(i)).is_zero():
            report.add("approximation differential does not square to zero", i)
        if not (a.f.block(i - 1) @ d.block(i)).is_zero():
            report.add("f is not a chain map into B with zero differential", i)
    if not report.ok:
        return report
    zy = compute_ZY(t, a.perversity)
    h = homology(a.A)
    for i in t.B.degrees():
        comp = zy.to_Z.block(i) @ a.f.block(i) @ h.cycle_section.block(i)
        if not is_invertible(comp):
            report.add("H(A) -> B -> Z is not an isomorphism", i,
                       f"dim H(A) = {h.space.dim(i)}, dim Z = {zy.Z[i].dim}, rank = {rank(comp)}")
    return report


@dataclass(frozen=True)
class ConeData:
    H_cf: GradedSpace
    ell: GradedMap
    bdry_iso: GradedMap
    model: ConeModel | None = None

    def bad_degrees(self) -> list[int]:
        bad = []
        for i in self.H_cf.degrees():
            if rank(self.ell.block(i)) != self.H_cf.dim(i) or not is_invertible(self.bdry_iso.block(i + 1)):
                bad.append(i)
        return bad


def cone_data(t: TubeDatum, a: Approximation) -> ConeData:
    zy = compute_ZY(t, a.perversity)
    B = t.B
    if a.A.has_zero_differential:
        model = cone_model(a.f)
        if model.kernel[B.max_degree].cols:
            raise PreconditionError("f is not injective in the top degree; widen the degree range")
        H, ell = model.space, model.include
    else:
        model = None
        zero_b = ChainComplex.zero(B)
        cone = mapping_cone(ChainMap(a.A, zero_b, a.f))
        hc = homology(cone)
        incl = GradedMap(B, cone.space, 0,
                         {i: vstack(Matrix.identity(B.dim(i)), Matrix.zeros(a.space.dim(i - 1), B.dim(i)))
                          for i in B.degrees()})
        ell = induced_on_homology(incl, homology(zero_b), hc)
        H = hc.space
    yspace = zy.y_space
    bdry = GradedMap(yspace, H, -1, {j: ell.block(j - 1) @ zy.y_in_b(j).basis for j in yspace.degrees()})
    cd = ConeData(H, ell, bdry, model)
    bad = cd.bad_degrees()
    if bad:
        raise ConsistencyError(f"Y_(i+1) -> B_i -> H_i(cone) is not bijective in degrees {bad}")
    return cd


def local_duality_iso(t: TubeDatum, a_p: Approximation, a_q: Approximation,
                      cone: ConeData | None = None) -> GradedPairing:
    """Pairing of H_r(cone of a_p) with A(a_q)_{N-1-r}.

    For a class c = [y] with y in Y_{r+1} inside B_r, the value on a is the
    boundary pairing of y with f(a).
    """
    a_p, a_q = a_p.formal(), a_q.formal()
    if a_q.perversity != dual(a_p.perversity) and not t.witt:
        raise PreconditionError("local duality pairs an approximation with one of the dual perversity")
    cone = cone or cone_data(t, a_p)
    zy = compute_ZY(t, a_p.perversity)
    N = t.N
    blocks = {}
    for r in cone.H_cf.degrees():
        y = zy.y_in_b(r + 1).basis
        phi = cone.bdry_iso.block(r + 1)
        blocks[r] = inverse(phi).T @ y.T @ t.boundary_form(r) @ a_q.f.block(N - 1 - r)
    pairing = GradedPairing(cone.H_cf, a_q.space, N - 1, blocks)
    bad = [r for r in cone.H_cf.degrees() if not is_invertible(pairing.block(r))]
    if bad:
        raise ConsistencyError(f"local duality is degenerate in degrees {bad}")
    return pairing


@dataclass(frozen=True)
class DegreeObstruction:
    diagram_method: bool
    pairing_method: bool


@dataclass(frozen=True)
class ObstructionReport:
    degrees: Mapping[int, DegreeObstruction]

    @property
    def vanish(self) -> bool:
        return all(d.pairing_method for d in self.degrees.values())

    @property
    def failing_degrees(self) -> list[int]:
        return [r for r, d in self.degrees.items() if not d.pairing_method]

    def to_dict(self) -> dict:
        return {
            "vanish": self.vanish,
            "degrees": {str(r): {"diagram_method": d.diagram_method, "pairing_method": d.pairing_method}
                        for r, d in self.degrees.items()},
        }


def obstructions_vanish(t: TubeDatum, a_p: Approximation, a_q: Approximation) -> ObstructionReport:
    a_p, a_q = a_p.formal(), a_q.formal()
    cone = cone_data(t, a_p)
    D = local_duality_iso(t, a_p, a_q, cone)
    N = t.N
    out = {}
    for r in t.B.degrees():
        G = t.boundary_form(r)
        fq = a_q.f.block(N - 1 - r)
        diagram = cone.ell.block(r).T @ D.block(r) == G @ fq
        pairing = (a_p.f.block(r).T @ G @ fq).is_zero()
        if diagram != pairing:
            raise ConsistencyError(f"obstruction tests disagree in degree {r}: diagram={diagram}, pairing={pairing}")
        out[r] = DegreeObstruction(diagram, pairing)
    return ObstructionReport(out)


def witt_approximation(t: TubeDatum, start: Approximation | None = None) -> Approximation:
    """Kill the obstructions of a Witt datum of even dimension N = 2m.

    Degrees r < m are kept; each A_s with s >= m is replaced by the
    annihilator of A_{N-1-s} under the boundary pairing.
    """
    if not t.witt:
        raise PreconditionError("the annihilator construction needs a Witt datum")
    if t.N % 2:
        raise PreconditionError("the annihilator construction needs even N")
    m = t.N // 2
    base = (start or default_approximation(t, "p")).formal()
    zy = compute_ZY(t, "p")
    cols = {}
    for s in t.B.degrees():
        if s < m:
            cols[s] = base.image(s).basis
            continue
        r = t.N - 1 - s
        a_r = base.image(r) if t.B.min_degree <= r <= t.B.max_degree else Subspace.zero(t.B.dim(r))
        a_s = subspace_annihilator(a_r, t.boundary_form(r))
        if a_s.intersection(zy.y_in_b(s + 1)).dim:
            raise ConsistencyError(f"annihilator meets Y_{s + 1} in degree {s}")
        if a_s.dim != zy.Z[s].dim or rank(zy.to_Z.block(s) @ a_s.basis) != a_s.dim:
            raise ConsistencyError(f"annihilator does not map isomorphically onto Z in degree {s}")
        cols[s] = a_s.basis
    a = Approximation.from_columns("p", t.B, cols)
    check_approximation(t, a).raise_if_failed(ConsistencyError)
    obs = obstructions_vanish(t, a, a)
    if not obs.vanish:
        raise ConsistencyError(f"obstructions survive in degrees {obs.failing_degrees}")
    return a
