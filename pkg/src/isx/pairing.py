"""Section families, the middle-degree intersection space pairing and its signature."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .approximation import Approximation, obstructions_vanish
from .globalspace import (
    GlobalDatum,
    IXModel,
    SectionFamily,
    global_duality,
    intersection_space,
    retraction_from_kernel,
    section_from_basis,
)
from .linalg import (
    Matrix,
    Subspace,
    format_fraction,
    hstack,
    image_basis,
    is_invertible,
    kernel_basis,
    quotient,
    row_reduce,
    signature,
)
from .report import ConsistencyError, PreconditionError
from .tube import TubeDatum


def _pivots(m: Matrix) -> list[int]:
    return row_reduce(m)[1]


def default_sections(ix: IXModel) -> SectionFamily:
    """s sends v(e_k) to e_k for the pivot columns k of v; r keeps the cokernel coordinates."""
    s, r = {}, {}
    for i in ix.space.degrees():
        v = ix.v.block(i)
        piv = _pivots(v)
        s[i] = section_from_basis(v.select_columns(piv), Matrix.identity(v.cols).select_columns(piv), v.rows)
        c, k = ix.ix.split(i)
        r[i] = hstack(Matrix.identity(c), Matrix.zeros(c, k))
    fam = SectionFamily(s, r, "default")
    assert not fam.failures(ix, ix)
    return fam


def random_sections(ix: IXModel, seed: int, bound: int = 3) -> SectionFamily:
    """Default family twisted by s -> s + u T and r -> r + [0 | X] with random T, X."""
    rng = random.Random(seed)

    def rnd(rows, cols):
        return Matrix([[Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(cols)]
                       for _ in range(rows)]) if rows and cols else Matrix.zeros(rows, cols)

    base = default_sections(ix)
    s, r = {}, {}
    for i in ix.space.degrees():
        u = ix.u.block(i)
        s[i] = base.s[i] + u @ rnd(u.cols, base.s[i].cols)
        c, k = ix.ix.split(i)
        r[i] = base.r[i] + hstack(Matrix.zeros(c, c), rnd(c, k))
    fam = SectionFamily(s, r, f"random-{seed}")
    assert not fam.failures(ix, ix)
    return fam


def paired_family(fam_p: SectionFamily, fam_q: SectionFamily) -> SectionFamily:
    """Sections of the first model with retractions of the dual one, as global duality consumes them."""
    return SectionFamily(fam_p.s, fam_q.r, f"{fam_p.label}/{fam_q.label}")


def _sj(ix: IXModel, fam: SectionFamily, i: int) -> Matrix:
    return fam.s[i] @ ix.j.block(i)


def _require_witt_even(ix: IXModel) -> None:
    if not ix.tube.witt:
        raise PreconditionError("untwisted sections and the middle pairing need a Witt instance")
    if ix.N % 2:
        raise PreconditionError("untwisted sections and the middle pairing need even N")


def untwisted_sections(ix: IXModel) -> SectionFamily:
    _require_witt_even(ix)
    obs = obstructions_vanish(ix.tube, ix.approximation, ix.approximation)
    if not obs.vanish:
        raise PreconditionError(f"local duality obstructions do not vanish in degrees {obs.failing_degrees}")
    N = ix.N
    # (i): s(j e_k) = h e_k on the pivot columns of j, extended by s(v e_l) = e_l
    s = {}
    for i in ix.space.degrees():
        j, v, h = ix.j.block(i), ix.v.block(i), ix.h.block(i)
        jp = _pivots(j)
        jb = j.select_columns(jp)
        vp = [p - len(jp) for p in _pivots(hstack(jb, v)) if p >= len(jp)]
        domain = hstack(jb, v.select_columns(vp))
        images = hstack(h.select_columns(jp), Matrix.identity(v.cols).select_columns(vp))
        s[i] = section_from_basis(domain, images, v.rows)
    # (ii): ker r inside s(Q), Q the largest subspace of im v orthogonal to h^{-1}(im s j)
    r, Q = {}, {}
    L = ix.glob.lefschetz
    for i in ix.space.degrees():
        k = N - i
        vb = image_basis(ix.v.block(i)).basis
        hinv = _preimage(ix.h.block(k), Subspace.span(s[k] @ ix.j.block(k)) if ix.space.dim(k) else None,
                         ix.glob.M.dim(k))
        Q[i] = Subspace.span(vb @ kernel_basis(hinv.T @ L.block(i).T @ vb).basis)
        jimg = image_basis(ix.j.block(i))
        if Q[i].intersection(jimg).dim or Q[i].dim + jimg.dim != vb.cols:
            raise ConsistencyError(f"im v is not Q + im j in degree {i}")
        sq = s[i] @ Q[i].basis
        himg = image_basis(ix.h.block(i))
        chosen = himg
        kr = []
        for c in range(sq.cols):
            col = sq.select_columns([c])
            if not chosen.contains(col):
                chosen = chosen + Subspace.span(col)
                kr.append(c)
        if chosen.dim != ix.space.dim(i):
            raise ConsistencyError(f"s(Q) + im h is not all of H_ix in degree {i}")
        r[i] = retraction_from_kernel(ix, i, sq.select_columns(kr))
    fam = SectionFamily(s, r, "untwisted")
    bad = fam.failures(ix, ix)
    if bad:
        raise ConsistencyError(f"untwisted family fails the section identities in degrees {bad}")
    return fam


def _preimage(h: Matrix, target: Subspace | None, ambient: int) -> Matrix:
    if target is None or h.rows == 0:
        return Matrix.identity(ambient)
    return kernel_basis(quotient(target).proj @ h).basis


@dataclass(frozen=True)
class UntwistedCheck:
    property_i: bool
    property_ii: bool
    h_decomposition: bool
    s_decomposition: bool

    @property
    def ok(self) -> bool:
        return self.property_i and self.property_ii and self.h_decomposition and self.s_decomposition


def _direct_sum(a: Subspace, b: Subspace, whole: Subspace) -> bool:
    return a.intersection(b).dim == 0 and a + b == whole


def check_untwisted(ix: IXModel, fam: SectionFamily, pairing=None) -> dict[int, UntwistedCheck]:
    """Both untwisted properties plus the two further decompositions, degree by degree."""
    _require_witt_even(ix)
    P = pairing if pairing is not None else global_duality(ix, ix, fam)
    N = ix.N
    out = {}
    for i in ix.space.degrees():
        k = N - i
        sj = Subspace.span(_sj(ix, fam, i))
        himg = image_basis(ix.h.block(i))
        uimg = image_basis(ix.u.block(i))
        simg = Subspace.span(fam.s[i] @ image_basis(ix.v.block(i)).basis)
        ker_r = kernel_basis(fam.r[i])
        p_i = sj <= himg
        p_ii = ker_r <= simg and (ker_r.basis.T @ P.block(i) @ _sj(ix, fam, k)).is_zero()
        out[i] = UntwistedCheck(p_i, p_ii, _direct_sum(uimg, sj, himg), _direct_sum(ker_r, sj, simg))
    return out


def adapted_basis(ix: IXModel, fam: SectionFamily) -> tuple[Matrix, tuple[int, int, int]]:
    """Basis of the middle degree ordered as im u, im s j, ker r."""
    n = ix.N // 2
    u = ix.u.block(n)
    ub = u.select_columns(_pivots(u))
    j = ix.j.block(n)
    sjb = fam.s[n] @ j.select_columns(_pivots(j))
    kb = kernel_basis(fam.r[n]).basis
    basis = hstack(ub, sjb, kb, rows=ix.space.dim(n))
    if not is_invertible(basis):
        raise PreconditionError("im u, im s j and ker r do not decompose the middle degree; use an untwisted family")
    return basis, (ub.cols, sjb.cols, kb.cols)


def ix_gram_matrix(ix: IXModel, fam: SectionFamily, pairing=None) -> Matrix:
    """Gram matrix of the middle pairing in the basis of :func:`adapted_basis`."""
    _require_witt_even(ix)
    P = pairing if pairing is not None else global_duality(ix, ix, fam)
    basis, _ = adapted_basis(ix, fam)
    return basis.T @ P.block(ix.N // 2) @ basis


def novikov_gram_matrix(ix: IXModel) -> Matrix:
    """Gram of (j a, j b) = (j a, b)_L on the pivot basis j e_k of im j in the middle degree."""
    if ix.N % 2:
        raise PreconditionError("the Novikov pairing lives in the middle degree of an even N")
    n = ix.N // 2
    j = ix.j.block(n)
    piv = _pivots(j)
    form = j.select_columns(piv).T @ ix.glob.lefschetz.block(n)
    if not (form @ kernel_basis(j).basis).is_zero():
        raise ConsistencyError("the Novikov pairing depends on the choice of lift")
    return form.select_columns(piv)


def block_form_ok(gram: Matrix, sizes: tuple[int, int, int]) -> bool:
    a, y, k = sizes
    cuts = [(0, a), (a, a + y), (a + y, a + y + k)]

    def blk(x, z):
        return gram.select_rows(range(*cuts[x])).select_columns(range(*cuts[z]))

    zero = [(0, 0), (0, 1), (1, 0), (1, 2), (2, 1), (2, 2)]
    return all(blk(x, z).is_zero() for x, z in zero) and blk(0, 2) == blk(2, 0).T


@dataclass(frozen=True)
class SignatureReport:
    gram_ix: Matrix
    gram_novikov: Matrix
    symmetric: bool
    sigma_ix: int | None
    sigma_novikov: int
    equal: bool
    block_form: bool
    novikov_match: bool
    untwisted: bool

    def to_dict(self) -> dict:
        def mat(m):
            return [[format_fraction(x) for x in row] for row in m.tolist()]

        return {
            "gram_ix": mat(self.gram_ix), "gram_novikov": mat(self.gram_novikov),
            "symmetric": self.symmetric, "sigma_ix": self.sigma_ix, "sigma_novikov": self.sigma_novikov,
            "equal": self.equal, "block_form": self.block_form, "novikov_match": self.novikov_match,
            "untwisted": self.untwisted,
        }


def signature_report(t: TubeDatum, g: GlobalDatum, a: Approximation) -> SignatureReport:
    if not t.witt:
        raise PreconditionError("the signature comparison needs a Witt instance")
    if t.N % 4:
        raise PreconditionError(f"the signature comparison needs N divisible by 4, got {t.N}")
    ix = intersection_space(t, g, a)
    fam = untwisted_sections(ix)
    P = global_duality(ix, ix, fam)
    checks = check_untwisted(ix, fam, P)
    basis, sizes = adapted_basis(ix, fam)
    gram = basis.T @ P.block(t.N // 2) @ basis
    nov = novikov_gram_matrix(ix)
    symmetric = gram == gram.T
    sigma_ix = signature(gram) if symmetric else None
    sigma_nov = signature(nov)
    y = gram.select_rows(range(sizes[0], sizes[0] + sizes[1])).select_columns(range(sizes[0], sizes[0] + sizes[1]))
    return SignatureReport(gram, nov, symmetric, sigma_ix, sigma_nov, sigma_ix == sigma_nov,
                           block_form_ok(gram, sizes), y == nov, all(c.ok for c in checks.values()))

