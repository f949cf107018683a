"""The complement datum, the intersection space model and its global duality."""
from __future__ import annotations

from dataclasses import dataclass

from .approximation import Approximation, ConeData, cone_data, local_duality_iso, obstructions_vanish
from .graded import ConeModel, GradedMap, GradedPairing, GradedSpace, cone_model, exactness_failures
from .linalg import Matrix, hstack, image_basis, inverse, is_invertible, kernel_basis, row_reduce, vstack
from .report import ConsistencyError, PreconditionError, ValidationReport
from .tube import TubeDatum, sign


@dataclass(frozen=True)
class GlobalDatum:
    """Homology M of the complement, the map iota: B -> M and the Lefschetz pairing.

    ``lefschetz`` pairs the relative model R_i = coker(iota_i) + ker(iota_{i-1})
    (coordinates as produced by :func:`relative_model`) with M_{N-i}.
    """

    M: GradedSpace
    iota: GradedMap
    lefschetz: GradedPairing


def relative_model(g: GlobalDatum) -> ConeModel:
    return cone_model(g.iota)


def relative_dims(iota: GradedMap) -> GradedSpace:
    return cone_model(iota).space


def validate_global(t: TubeDatum, g: GlobalDatum) -> ValidationReport:
    report = ValidationReport()
    N = t.N
    if g.iota.source != t.B or g.iota.target != g.M or g.iota.shift != 0:
        report.add("iota must be a degree-0 map B -> M")
        return report
    R = relative_model(g)
    top = g.M.max_degree
    if R.kernel[top].cols:
        report.add("iota has a kernel in the top degree; the relative model leaves the degree range", top)
        return report
    L = g.lefschetz
    if L.total != N or L.right != g.M:
        report.add("lefschetz must pair R with M in total degree N")
        return report
    if L.left != R.space:
        report.add("lefschetz left space differs from the relative model", None,
                   f"expected dims {list(R.space.dims)}, got {list(L.left.dims)}")
        return report
    for i in L.degenerate_degrees():
        report.add("lefschetz pairing degenerate", i)

    j, delta, iota = R.include, R.boundary, g.iota
    for i in exactness_failures(delta, iota):
        report.add("exactness at B", i)
    for i in exactness_failures(iota, j):
        report.add("exactness at M", i)
    for i in exactness_failures(j, delta):
        report.add("exactness at R", i)

    lo, hi = g.M.min_degree, g.M.max_degree
    for i in range(lo - 1, hi + 2):
        eps = sign(i * (N - i))
        # D_L'(iota b)(beta) = D_bdry(b)(delta beta)
        if (L.block(N - i) @ iota.block(i)).T.scale(eps) != t.boundary_form(i) @ delta.block(N - i):
            report.add("square iota / delta", i)
        # D_L(j a)(b) = D_L'(a)(j b)
        J = j.block(i).T @ L.block(i)
        if J != (j.block(N - i).T @ L.block(N - i)).T.scale(eps):
            report.add("square j / j", i)
        # connecting square, commuting up to (-1)^(N-i)
        if delta.block(i).T @ t.boundary_form(i - 1) != (L.block(i) @ iota.block(N - i)).scale(sign(N - i)):
            report.add("square delta / iota", i)
    return report


@dataclass(frozen=True)
class IXModel:
    """Homology of the cone on phi = iota o f with the maps relating it to its neighbours.

    H_ix(i) = coker(phi_i) + ker(phi_{i-1});  u: H_cf -> H_ix,  v: H_ix -> R,
    h: M -> H_ix,  g: H_ix -> A (degree -1).
    """

    tube: TubeDatum
    glob: GlobalDatum
    approximation: Approximation
    cone: ConeData
    rel: ConeModel
    ix: ConeModel
    u: GradedMap
    v: GradedMap
    h: GradedMap
    g: GradedMap
    ell: GradedMap
    j: GradedMap
    delta: GradedMap

    @property
    def space(self) -> GradedSpace:
        return self.ix.space

    @property
    def phi(self) -> GradedMap:
        return self.ix.phi

    @property
    def f(self) -> GradedMap:
        return self.approximation.f

    @property
    def iota(self) -> GradedMap:
        return self.glob.iota

    @property
    def N(self) -> int:
        return self.tube.N

    def relation_failures(self) -> list[str]:
        out = []

        def same(name, x, y):
            if not x.equals(y):
                out.append(name)

        same("j = v o h", self.j, self.v @ self.h)
        same("g o u = 0", self.g @ self.u, GradedMap.zero(self.u.source, self.g.target, -1))
        same("h o iota = u o ell", self.h @ self.iota, self.u @ self.ell)
        same("f o g = delta o v", self.f @ self.g, self.delta @ self.v)
        # (1): the connecting map R -> H_cf[-1] is defined through B[-1]; exactness is what is checked
        connecting = self.ell @ self.delta
        for name, first, second in [
            ("(1) exact at H_ix", self.u, self.v), ("(1) exact at R", self.v, connecting),
            ("(1) exact at H_cf", connecting, self.u),
            ("exact at M", self.phi, self.h), ("exact at H_ix (phi triangle)", self.h, self.g),
            ("exact at A", self.g, self.phi),
        ]:
            bad = exactness_failures(first, second)
            if bad:
                out.append(f"{name} fails in degrees {bad}")
        cf_connecting = self.cone.model.boundary if self.cone.model else None
        if cf_connecting is not None:
            same("(2) H_cf -> A[-1] equals g o u", cf_connecting, self.g @ self.u)
        same("(3) M -> R equals v o h", self.j, self.v @ self.h)
        same("(4) B -> H_cf -> H_ix equals B -> M -> H_ix", self.u @ self.ell, self.h @ self.iota)
        same("(5) H_ix -> R -> B[-1] equals H_ix -> A[-1] -> B[-1]", self.delta @ self.v, self.f @ self.g)
        return out


def intersection_space(t: TubeDatum, g: GlobalDatum, a: Approximation) -> IXModel:
    a = a.formal()
    cone = cone_data(t, a)
    rel = relative_model(g)
    phi = g.iota @ a.f
    ix = cone_model(phi)
    if ix.kernel[g.M.max_degree].cols:
        raise PreconditionError("phi has a kernel in the top degree; widen the degree range")
    u = cone.model.map_to(ix, GradedMap.identity(a.space), g.iota)
    v = ix.map_to(rel, a.f, GradedMap.identity(g.M))
    model = IXModel(t, g, a, cone, rel, ix, u, v, ix.include, ix.boundary, cone.ell, rel.include, rel.boundary)
    bad = model.relation_failures()
    if bad:
        raise ConsistencyError("intersection space relations fail: " + "; ".join(bad))
    return model


@dataclass(frozen=True)
class SectionFamily:
    """Sections s_i: im(v_i) -> H_ix(i) and retractions r_i: H_ix(i) -> coim(h_i).

    ``s[i]`` is stored as a matrix R_i -> H_ix(i); only its restriction to
    im(v_i) matters.  ``r[i]`` lands in the cokernel coordinates of phi_i,
    which are coordinates on coim(h_i).
    """

    s: dict
    r: dict
    label: str = ""

    def failures(self, ix_s: IXModel, ix_r: IXModel) -> list[int]:
        bad = []
        for i in ix_s.space.degrees():
            vb = image_basis(ix_s.v.block(i)).basis
            if ix_s.v.block(i) @ self.s[i] @ vb != vb:
                bad.append(i)
        for i in ix_r.space.degrees():
            c, _ = ix_r.ix.split(i)
            if self.r[i] @ ix_r.ix.coker_embedding(i) != Matrix.identity(c):
                bad.append(i)
        return sorted(set(bad))


def section_from_basis(domain: Matrix, images: Matrix, ambient: int) -> Matrix:
    """Matrix on k^ambient sending the columns of ``domain`` to ``images`` and a pivot complement to 0."""
    if domain.cols == 0:
        return Matrix.zeros(images.rows, ambient)
    _, piv, _ = row_reduce(hstack(domain, Matrix.identity(ambient)))
    comp = [p - domain.cols for p in piv if p >= domain.cols]
    full = hstack(domain, Matrix.identity(ambient).select_columns(comp))
    return hstack(images, Matrix.zeros(images.rows, len(comp))) @ inverse(full)


def retraction_from_kernel(ix: IXModel, i: int, kernel: Matrix) -> Matrix:
    """Retraction onto coim(h_i) whose kernel is spanned by ``kernel`` (a complement of im h_i)."""
    c, k = ix.ix.split(i)
    if k == 0:
        return Matrix.identity(c)
    top, bottom = kernel.select_rows(range(c)), kernel.select_rows(range(c, c + k))
    return hstack(Matrix.identity(c), -(top @ inverse(bottom)))


def global_duality(ix_p: IXModel, ix_q: IXModel, fam: SectionFamily) -> GradedPairing:
    """Pairing of H_ix(p)_r with H_ix(q)_{N-r} built from the two defining clauses:

    (u a, y) = D_loc(a)(g y)   and   (s b, y) = D_L(b)(lift(r y)).
    """
    t, N = ix_p.tube, ix_p.N
    obs = obstructions_vanish(t, ix_p.approximation, ix_q.approximation)
    if not obs.vanish:
        raise PreconditionError(f"local duality obstructions do not vanish in degrees {obs.failing_degrees}")
    bad = fam.failures(ix_p, ix_q)
    if bad:
        raise PreconditionError(f"section family identities fail in degrees {bad}")
    D = local_duality_iso(t, ix_p.approximation, ix_q.approximation, ix_p.cone)
    L = ix_p.glob.lefschetz
    problems = []
    blocks = {}
    for r in ix_p.space.degrees():
        k = N - r
        gq = ix_q.g.block(k)
        ur = ix_p.u.block(r)
        _, upiv, _ = row_reduce(ur)
        vb = image_basis(ix_p.v.block(r)).basis
        lift_r = ix_q.ix.coker[k].section @ fam.r[k] if ix_q.space.min_degree <= k <= ix_q.space.max_degree \
            else Matrix.zeros(ix_q.phi.target.dim(k), 0)
        basis = hstack(ur.select_columns(upiv), fam.s[r] @ vb)
        values = vstack(D.block(r).select_rows(upiv) @ gq, vb.T @ L.block(r) @ lift_r)
        if not is_invertible(basis):
            problems.append(f"im u + im s is not all of H_ix in degree {r}")
            continue
        ker_u = kernel_basis(ur).basis
        if not (ker_u.T @ D.block(r) @ gq).is_zero():
            problems.append(f"first clause not well defined on ker u in degree {r}")
        if not (vb.T @ L.block(r) @ ix_q.phi.block(k)).is_zero():
            problems.append(f"lefschetz values on im v do not vanish on ker h in degree {r}")
        blocks[r] = inverse(basis).T @ values
    if problems:
        raise ConsistencyError("; ".join(problems))
    pairing = GradedPairing(ix_p.space, ix_q.space, N, blocks)
    _check_duality(ix_p, ix_q, fam, D, pairing)
    return pairing


def _check_duality(ix_p: IXModel, ix_q: IXModel, fam: SectionFamily, D: GradedPairing,
                   P: GradedPairing) -> None:
    N = ix_p.N
    L = ix_p.glob.lefschetz
    problems = []
    for r in ix_p.space.degrees():
        k = N - r
        if ix_p.space.dim(r) != ix_q.space.dim(k):
            problems.append(f"dim H_ix({r}) != dim dual H_ix({k})")
            continue
        Pr = P.block(r)
        if not is_invertible(Pr):
            problems.append(f"global duality degenerate in degree {r}")
        # outer rectangles of the ladder
        if not (ix_p.v @ ix_p.u).block(r).is_zero() or not (ix_q.g.block(k) @ ix_q.h.block(k)).is_zero():
            problems.append(f"left rectangle does not commute in degree {r}")
        lhs = (ix_p.ell.block(r - 1) @ ix_p.delta.block(r)).T @ D.block(r - 1)
        if lhs != (L.block(r) @ ix_q.phi.block(k)).scale(sign(N - r)):
            problems.append(f"right square does not commute in degree {r}")
        # evaluation identities
        hq = ix_q.h.block(k)
        if not (ix_p.u.block(r).T @ Pr @ hq).is_zero():
            problems.append(f"(im u, im h) != 0 in degree {r}")
        vb = image_basis(ix_p.v.block(r)).basis
        sv = fam.s[r] @ vb
        ker_r = kernel_basis(fam.r[k]).basis if ix_q.space.min_degree <= k <= ix_q.space.max_degree \
            else Matrix.zeros(0, 0)
        if ker_r.rows == Pr.cols and not (sv.T @ Pr @ ker_r).is_zero():
            problems.append(f"(im s, ker r) != 0 in degree {r}")
        if sv.T @ Pr @ hq != vb.T @ L.block(r):
            problems.append(f"(s b, h m) != (b, m)_L in degree {r}")
        ul = ix_p.u.block(r) @ ix_p.ell.block(r)
        rhs = (ix_p.iota.block(r).T @ L.block(k).T @ ix_q.v.block(k)).scale(sign(r * k))
        if ul.T @ Pr != rhs:
            problems.append(f"(u l a, b) != +-(v b, iota a)_L in degree {r}")
    if problems:
        raise ConsistencyError("; ".join(problems))
