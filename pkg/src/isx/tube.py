"""The local datum around the singular stratum and its Z / Y subquotients.

A tube datum holds, for each perversity label, the exact ladder

    ... -> B_i -> P_i -> P_rel_i -> B_{i-1} -> ...

(boundary homology, absolute and relative intersection homology of the
tube) together with the duality pairings linking the two perversities.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .graded import GradedMap, GradedPairing, GradedSpace, exactness_failures
from .linalg import Matrix, Quotient, Subspace, image_basis, kernel_basis, quotient, solve
from .report import ValidationError, ValidationReport

PERVERSITIES = ("p", "q")


def dual(perversity: str) -> str:
    if perversity not in PERVERSITIES:
        raise ValueError(f"unknown perversity label {perversity!r}")
    return "q" if perversity == "p" else "p"


def sign(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass(frozen=True)
class Ladder:
    """One perversity's long exact sequence plus its absolute/relative pairing.

    ``D_abs_rel`` pairs P(this)_i with P_rel(dual)_{N-i}.
    """

    P: GradedSpace
    P_rel: GradedSpace
    b_to_p: GradedMap
    p_to_rel: GradedMap
    rel_bdry: GradedMap
    D_abs_rel: GradedPairing


@dataclass(frozen=True)
class TubeDatum:
    N: int
    witt: bool
    B: GradedSpace
    D_bdry: GradedPairing
    ladders: Mapping[str, Ladder]

    def __post_init__(self):
        need = {"p"} if self.witt else set(PERVERSITIES)
        if set(self.ladders) != need:
            raise ValueError(f"expected ladders for {sorted(need)}, got {sorted(self.ladders)}")

    def ladder(self, perversity: str) -> Ladder:
        dual(perversity)
        return self.ladders["p"] if self.witt else self.ladders[perversity]

    @property
    def perversities(self) -> tuple[str, ...]:
        return ("p",) if self.witt else PERVERSITIES

    @property
    def degree_range(self) -> tuple[int, int]:
        return self.B.min_degree, self.B.max_degree

    def boundary_form(self, i: int) -> Matrix:
        """Gram block of B_i against B_{N-1-i}."""
        return self.D_bdry.block(i)


def _structure(t: TubeDatum, report: ValidationReport) -> bool:
    ok = True
    if t.N < 2:
        report.add("dimension must be at least 2", None, f"got {t.N}")
        ok = False
    pd = t.D_bdry
    if pd.total != t.N - 1 or pd.left != t.B or pd.right != t.B:
        report.add("boundary pairing must pair B with B in total degree N-1")
        ok = False
    for x in t.perversities:
        lad, y = t.ladder(x), t.ladder(dual(x))
        checks = [
            (lad.b_to_p.source == t.B and lad.b_to_p.target == lad.P and lad.b_to_p.shift == 0, "b_to_p: B -> P"),
            (lad.p_to_rel.source == lad.P and lad.p_to_rel.target == lad.P_rel and lad.p_to_rel.shift == 0,
             "p_to_rel: P -> P_rel"),
            (lad.rel_bdry.source == lad.P_rel and lad.rel_bdry.target == t.B and lad.rel_bdry.shift == -1,
             "rel_bdry: P_rel -> B of degree -1"),
            (lad.D_abs_rel.left == lad.P and lad.D_abs_rel.right == y.P_rel and lad.D_abs_rel.total == t.N,
             "D_abs_rel pairs P with the dual P_rel in total degree N"),
        ]
        for good, what in checks:
            if not good:
                report.add(f"{x}: structure", None, f"expected {what}")
                ok = False
    return ok


def validate_tube(t: TubeDatum) -> ValidationReport:
    report = ValidationReport()
    if not _structure(t, report):
        return report
    N = t.N
    lo, hi = t.degree_range
    degrees = range(lo - 1, hi + 2)

    for i in t.D_bdry.degenerate_degrees():
        report.add("boundary pairing degenerate", i)
    for i in degrees:
        a, b = t.D_bdry.block(i), t.D_bdry.block(N - 1 - i)
        if b != a.T.scale(sign(i * (N - 1 - i))):
            report.add("boundary pairing not graded-symmetric", i)

    for x in t.perversities:
        lad, y = t.ladder(x), t.ladder(dual(x))
        for i in exactness_failures(lad.rel_bdry, lad.b_to_p):
            report.add(f"{x}: exactness at B", i)
        for i in exactness_failures(lad.b_to_p, lad.p_to_rel):
            report.add(f"{x}: exactness at P", i)
        for i in exactness_failures(lad.p_to_rel, lad.rel_bdry):
            report.add(f"{x}: exactness at P_rel", i)
        for i in lad.D_abs_rel.degenerate_degrees():
            report.add(f"{x}: absolute/relative pairing degenerate", i)
        E, Ey = lad.D_abs_rel, y.D_abs_rel
        for i in degrees:
            G = t.D_bdry.block(i)
            # B_i -> P_i against the dual of P_rel(y)_{N-i} -> B_{N-1-i}
            if lad.b_to_p.block(i).T @ E.block(i) != G @ y.rel_bdry.block(N - i):
                report.add(f"{x}: ladder square B -> P", i)
            # P_i -> P_rel_i against the dual of P(y)_{N-i} -> P_rel(y)_{N-i}
            lhs = (Ey.block(N - i) @ lad.p_to_rel.block(i)).T.scale(sign(i * (N - i)))
            if lhs != E.block(i) @ y.p_to_rel.block(N - i):
                report.add(f"{x}: ladder square P -> P_rel", i)
            # P_rel_i -> B_{i-1}; connecting squares commute up to (-1)^(N-i)
            lhs = lad.rel_bdry.block(i).T @ t.D_bdry.block(i - 1)
            rhs = (Ey.block(N - i).T @ y.b_to_p.block(N - i)).scale(sign((N - i) * (i + 1)))
            if lhs != rhs:
                report.add(f"{x}: ladder square P_rel -> B", i)
    return report


@dataclass(frozen=True)
class ZYData:
    """Z_i = im(B_i -> P_i), Y_i = coker(P_i -> P_rel_i) and Y_i inside B_{i-1}."""

    perversity: str
    Z: Mapping[int, Subspace]
    Y: Mapping[int, Quotient]
    Y_in_B: Mapping[int, Subspace]
    to_Z: GradedMap

    @property
    def z_space(self) -> GradedSpace:
        return self.to_Z.target

    @property
    def y_space(self) -> GradedSpace:
        lo, hi = min(self.Y), max(self.Y)
        return GradedSpace.from_function(lo, hi, lambda i: self.Y[i].dim)

    def y_in_b(self, i: int) -> Subspace:
        """Y_i as a subspace of B_{i-1}."""
        s = self.Y_in_B.get(i)
        if s is None:
            return Subspace.zero(self.to_Z.source.dim(i - 1))
        return s


def _raw_zy(t: TubeDatum, perversity: str) -> ZYData:
    lad = t.ladder(perversity)
    lo, hi = t.degree_range
    Z = {i: image_basis(lad.b_to_p.block(i)) for i in range(lo, hi + 1)}
    Y = {i: quotient(image_basis(lad.p_to_rel.block(i))) for i in range(lo, hi + 1)}
    Y_in_B = {i: image_basis(lad.rel_bdry.block(i)) for i in range(lo, hi + 2)}
    zspace = GradedSpace.from_function(lo, hi, lambda i: Z[i].dim)
    blocks = {}
    for i in range(lo, hi + 1):
        x = solve(Z[i].basis, lad.b_to_p.block(i))
        assert x is not None
        blocks[i] = x
    return ZYData(perversity, Z, Y, Y_in_B, GradedMap(t.B, zspace, 0, blocks))


def compute_ZY(t: TubeDatum, perversity: str) -> ZYData:
    # the datum is immutable, so the result is memoised on it
    cache = t.__dict__.setdefault("_zy_cache", {})
    if perversity not in cache:
        cache[perversity] = _compute_ZY(t, perversity)
    return cache[perversity]


def _compute_ZY(t: TubeDatum, perversity: str) -> ZYData:
    zy = _raw_zy(t, perversity)
    other = _raw_zy(t, dual(perversity))
    N = t.N
    lo, hi = t.degree_range
    problems = ValidationReport()
    for i in range(lo, hi + 1):
        y = zy.y_in_b(i + 1)
        if y.dim + zy.Z[i].dim != t.B.dim(i):
            problems.add("0 -> Y_{i+1} -> B_i -> Z_i -> 0 has wrong dimensions", i)
        elif y != kernel_basis(zy.to_Z.block(i)):
            problems.add("Y_{i+1} is not the kernel of B_i -> Z_i", i)
        if zy.Y[i].dim != (other.Z[N - i].dim if lo <= N - i <= hi else 0):
            problems.add("dim Y_i differs from dim of the dual Z_{N-i}", i)
        g = t.boundary_form(i)
        if not (y.basis.T @ g @ other.y_in_b(N - i).basis).is_zero():
            problems.add("boundary pairing does not vanish on Y_{i+1} x dual Y_{N-i}", i)
    problems.raise_if_failed(ValidationError)
    return zy
