"""Seeded random instances built in normal form and then scrambled by changes of basis."""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping

from .globalspace import GlobalDatum, relative_model
from .graded import GradedMap, GradedPairing, GradedSpace, cone_model
from .instance import Instance
from .linalg import (
    Matrix,
    Subspace,
    block_diagonal,
    hstack,
    inverse,
    is_invertible,
    kernel_basis,
    rank,
    solve,
    subspace_annihilator,
    vstack,
)
from .tube import Ladder, TubeDatum, dual, sign


@dataclass(frozen=True)
class GenProfile:
    """Dimension bookkeeping for a generated instance (N even).

    z_profile[i] = dim Z(p)_i for i < N, extra_profile[i] = dim of the p-summand of
    P_i untouched by the boundary (0 <= i <= N), kernel_profile[i] = dim ker iota_i
    (i < N) and coker_profile[i] = dim coker iota_i (0 <= i <= N).  For non-Witt
    profiles z_dual_profile gives dim Z(q)_i.
    """

    N: int
    seed: int
    z_profile: tuple[int, ...]
    extra_profile: tuple[int, ...]
    kernel_profile: tuple[int, ...]
    coker_profile: tuple[int, ...]
    witt: bool = True
    z_dual_profile: tuple[int, ...] | None = None
    max_entry: int = 3
    adversarial: bool = False
    middle_signature: int | None = None

    def problems(self) -> list[str]:
        N, out = self.N, []
        if N < 2 or N % 2:
            return [f"the generator needs an even dimension N >= 2, got {N}"]
        m = N // 2
        lengths = {"z_profile": (self.z_profile, N), "extra_profile": (self.extra_profile, N + 1),
                   "kernel_profile": (self.kernel_profile, N), "coker_profile": (self.coker_profile, N + 1)}
        if not self.witt:
            if self.z_dual_profile is None:
                return ["non-Witt profiles need z_dual_profile"]
            lengths["z_dual_profile"] = (self.z_dual_profile, N)
        for name, (vals, n) in lengths.items():
            if len(vals) != n:
                out.append(f"{name} must have {n} entries, got {len(vals)}")
            if any(v < 0 for v in vals):
                out.append(f"{name} has negative entries")
        if self.max_entry < 1:
            out.append("max_entry must be positive")
        if out:
            return out
        zq = self.z_profile if self.witt else self.z_dual_profile
        b = self.boundary_dims()
        for i in range(N):
            j = N - 1 - i
            if self.z_profile[i] - zq[i] != self.z_profile[j] - zq[j]:
                out.append(f"z(p) - z(q) must be symmetric under i <-> N-1-i (degree {i})")
            if self.kernel_profile[i] + self.kernel_profile[j] != b[i]:
                out.append(f"kernel_profile[{i}] + kernel_profile[{j}] must equal dim B_{i} = {b[i]}")
        for i in range(N + 1):
            if self.coker_profile[i] != self.coker_profile[N - i]:
                out.append(f"coker_profile must be symmetric under i <-> N-i (degree {i})")
            if self.witt and self.extra_profile[i] != self.extra_profile[N - i]:
                out.append(f"extra_profile must be symmetric under i <-> N-i (degree {i})")
        if m % 2:
            if self.witt and self.extra_profile[m] % 2:
                out.append("a skew middle pairing needs extra_profile[N/2] even")
            if self.coker_profile[m] % 2:
                out.append("a skew middle pairing needs coker_profile[N/2] even")
        if self.middle_signature is not None:
            c = self.coker_profile[m]
            if m % 2 or abs(self.middle_signature) > c or (c - self.middle_signature) % 2:
                out.append("middle_signature incompatible with coker_profile[N/2]")
        return out

    def boundary_dims(self) -> list[int]:
        zq = self.z_profile if self.witt else self.z_dual_profile
        return [self.z_profile[i] + zq[self.N - 1 - i] for i in range(self.N)]

    @classmethod
    def random(cls, seed: int, N: int, adversarial: bool = False, witt: bool = True,
               max_entry: int = 3) -> "GenProfile":
        rng = random.Random(f"profile:{seed}:{N}:{adversarial}:{witt}")
        m = N // 2
        pairs = [(r, N - 1 - r) for r in range(m)]
        zp, zq = [0] * N, [0] * N
        forced = rng.randrange(m) if adversarial else None
        for k, (r, s) in enumerate(pairs):
            while True:
                a, b = rng.randint(0, 2), rng.randint(0, 2)
                if witt:
                    c, d = a, b
                else:
                    c, d = rng.randint(0, 2), rng.randint(0, 2)
                    if a - c != b - d:
                        continue
                clash = a * d > 0 or b * c > 0
                if k == forced and a * d > 0:
                    break
                if k != forced and (not clash or (adversarial and rng.random() < 0.3)):
                    break
            zp[r], zp[s], zq[r], zq[s] = a, b, c, d
        extra = [0] * (N + 1)
        for i in range(m + 1):
            e = rng.randint(0, 1)
            if i == m:
                e = rng.choice([0, 2]) if (m % 2 and witt) else rng.randint(0, 2)
            extra[i] = e
            if witt:
                extra[N - i] = e
            elif i != m:
                extra[N - i] = rng.randint(0, 1)
        b = [zp[i] + zq[N - 1 - i] for i in range(N)]
        kern = [0] * N
        for r, s in pairs:
            kern[r] = rng.randint(0, b[r])
            kern[s] = b[r] - kern[r]
        cok = [0] * (N + 1)
        for i in range(m + 1):
            c = rng.randint(0, 1)
            if i == m:
                c = rng.choice([0, 2]) if m % 2 else rng.randint(0, 2)
            cok[i] = cok[N - i] = c
        return cls(N, seed, tuple(zp), tuple(extra), tuple(kern), tuple(cok), witt,
                   None if witt else tuple(zq), max_entry, adversarial)


class _Rand:
    def __init__(self, seed: int, bound: int):
        self.rng = random.Random(seed)
        self.bound = bound

    def integer(self, lo: int | None = None, hi: int | None = None) -> int:
        return self.rng.randint(-self.bound if lo is None else lo, self.bound if hi is None else hi)

    def rational(self) -> Fraction:
        return Fraction(self.integer(), self.rng.randint(1, self.bound))

    def matrix(self, r: int, c: int, rational: bool = True) -> Matrix:
        gen = self.rational if rational else self.integer
        return Matrix([[gen() for _ in range(c)] for _ in range(r)]) if r and c else Matrix.zeros(r, c)

    def full_rank(self, r: int, c: int) -> Matrix:
        while True:
            m = self.matrix(r, c, rational=False)
            if rank(m) == min(r, c):
                return m

    def invertible(self, n: int, rational: bool = False) -> Matrix:
        while True:
            m = self.matrix(n, n, rational)
            if is_invertible(m):
                return m

    def symmetric(self, n: int, signature: int | None = None) -> Matrix:
        if signature is not None:
            d = [1] * ((n + signature) // 2) + [-1] * ((n - signature) // 2)
            p = self.invertible(n)
            return p.T @ Matrix.diagonal(d) @ p
        while True:
            a = self.matrix(n, n)
            s = a + a.T
            if is_invertible(s):
                return s

    def skew(self, n: int) -> Matrix:
        while True:
            a = self.matrix(n, n)
            s = a - a.T
            if is_invertible(s):
                return s


def _surjection_with_kernel(rnd: _Rand, kernel: Subspace) -> Matrix:
    """Random surjection out of the ambient space whose kernel is exactly ``kernel``."""
    n = kernel.ambient_dim
    comp = subspace_annihilator(kernel, Matrix.identity(n)).basis  # vectors orthogonal to kernel
    return (comp @ rnd.invertible(comp.cols)).T if comp.cols else Matrix.zeros(0, n)


def _left_annihilator(sub: Subspace, form: Matrix) -> Subspace:
    """{x : x^T form y = 0 for all y in sub}."""
    return kernel_basis((form @ sub.basis).T)


def generate_instance(p: GenProfile) -> Instance:
    bad = p.problems()
    if bad:
        raise ValueError("inconsistent profile: " + "; ".join(bad))
    rnd = _Rand(p.seed, p.max_entry)
    N, m = p.N, p.N // 2
    lo, hi = 0, N
    z = {"p": p.z_profile, "q": p.z_profile if p.witt else p.z_dual_profile}
    extra = {"p": p.extra_profile,
             "q": p.extra_profile if p.witt else tuple(p.extra_profile[N - i] for i in range(N + 1))}
    perv = ("p",) if p.witt else ("p", "q")
    b = p.boundary_dims() + [0]
    B = GradedSpace(lo, hi, tuple(b))

    def zd(x, i):
        return z[x][i] if 0 <= i < N else 0

    # boundary pairing: G_{N-1-i} = eps G_i^T, eps = +1 for even N
    G = {}
    for i in range(m):
        G[i] = rnd.invertible(b[i], rational=True)
        G[N - 1 - i] = G[i].T.scale(sign(i * (N - 1 - i)))

    # Y(x)_{i+1} inside B_i is the left annihilator of Y(x')_{N-i} inside B_{N-1-i}
    Y: dict[str, dict[int, Subspace]] = {x: {} for x in ("p", "q")}
    for x in perv:
        xd = dual(x) if not p.witt else x
        for i in range(m):
            free = Subspace.span(rnd.full_rank(b[N - 1 - i], zd(x, i)))
            Y[xd][N - i] = free
            Y[x][i + 1] = _left_annihilator(free, G[i])
    if p.witt:
        Y["q"] = Y["p"]
    for x in ("p", "q"):
        for i in range(lo, hi + 2):
            Y[x].setdefault(i, Subspace.zero(b[i - 1] if 0 <= i - 1 < N else 0))

    Pi = {x: {i: _surjection_with_kernel(rnd, Y[x][i + 1]) for i in range(N)} for x in ("p", "q")}

    def Pdim(x, i):
        return zd(x, i) + extra[x][i]

    def Rdim(x, i):
        return extra[x][i] + Y[x][i].dim

    # S blocks pair E(x)_i with E'(x')_{N-i}: S(x)_i = sigma_i S(x')_{N-i}^T
    S: dict[tuple[str, int], Matrix] = {}
    for x in perv:
        for i in range(lo, hi + 1):
            if (x, i) in S:
                continue
            xd, k = (x if p.witt else dual(x)), N - i
            e = extra[x][i]
            if (xd, k) == (x, i):
                S[x, i] = rnd.symmetric(e) if sign(i * k) == 1 else rnd.skew(e)
            else:
                S[x, i] = rnd.invertible(e, rational=True)
                S[xd, k] = S[x, i].T.scale(sign(i * k))
    ladders = {}
    for x in perv:
        xd = dual(x)
        P = GradedSpace.from_function(lo, hi, lambda i: Pdim(x, i))
        Prel = GradedSpace.from_function(lo, hi, lambda i: Rdim(x, i))
        b_to_p, p_to_rel, rel_bdry, E = {}, {}, {}, {}
        for i in range(lo, hi + 1):
            zi, ei = zd(x, i), extra[x][i]
            if i < N:
                b_to_p[i] = vstack(Pi[x][i], Matrix.zeros(ei, b[i]))
            p_to_rel[i] = vstack(hstack(Matrix.zeros(ei, zi), Matrix.identity(ei)),
                                 Matrix.zeros(Y[x][i].dim, zi + ei))
            if i >= 1:
                rel_bdry[i] = hstack(Matrix.zeros(b[i - 1], ei), Y[x][i].basis)
            k = N - i
            ydual = Y[xd][k].basis if 0 <= k - 1 < N else Matrix.zeros(0, 0)
            if zi:
                W = solve(Pi[x][i].T, G[i] @ ydual)
                assert W is not None
            else:
                W = Matrix.zeros(0, Y[xd][k].dim)
            e_dual = extra[xd][k] if lo <= k <= hi else 0
            assert e_dual == ei
            E[i] = vstack(hstack(Matrix.zeros(zi, ei), W),
                          hstack(S[x, i], rnd.matrix(ei, W.cols)))
        ladders[x] = dict(P=P, P_rel=Prel, b_to_p=b_to_p, p_to_rel=p_to_rel, rel_bdry=rel_bdry, E=E)
    built = {}
    for x in perv:
        L = ladders[x]
        Ld = ladders[dual(x)] if not p.witt else L
        built[x] = Ladder(
            L["P"], L["P_rel"],
            GradedMap(B, L["P"], 0, L["b_to_p"]),
            GradedMap(L["P"], L["P_rel"], 0, L["p_to_rel"]),
            GradedMap(L["P_rel"], B, -1, L["rel_bdry"]),
            GradedPairing(L["P"], Ld["P_rel"], N, L["E"]),
        )
    tube = TubeDatum(N, p.witt, B, GradedPairing(B, B, N - 1, G), built)

    glob = _generate_global(p, rnd, tube)
    inst = Instance(f"generated-{p.seed}", tube, glob)
    return scramble(inst, rnd)


def _generate_global(p: GenProfile, rnd: _Rand, t: TubeDatum) -> GlobalDatum:
    N, m = p.N, p.N // 2
    b = [t.B.dim(i) for i in range(N + 1)]
    k, c = list(p.kernel_profile) + [0], p.coker_profile
    G = t.boundary_form
    K: dict[int, Subspace] = {}
    for i in range(m):
        j = N - 1 - i
        K[j] = Subspace.span(rnd.full_rank(b[j], k[j]))
        K[i] = _left_annihilator(K[j], G(i))
    K[N] = Subspace.zero(0)
    PiK = {i: _surjection_with_kernel(rnd, K[i]) for i in range(N + 1)}
    M = GradedSpace.from_function(0, N, lambda i: b[i] - k[i] + c[i])
    iota = GradedMap(t.B, M, 0, {i: vstack(PiK[i], Matrix.zeros(c[i], b[i])) for i in range(N + 1)})

    def kb(i):
        return K[i].basis if 0 <= i <= N else Matrix.zeros(0, 0)

    # normal coordinates on R_i: (coker part = F_i, kernel part = K_{i-1} w.r.t. kb)
    Psi = {}
    for i in range(N + 1):
        # Psi_{N-i}^T = solve(PiK_i^T, eps G_i kb_{N-1-i}), eps = (-1)^{i(N-i)}
        if i <= N - 1 and PiK[i].rows:
            x = solve(PiK[i].T, (G(i) @ kb(N - 1 - i)).scale(sign(i * (N - i))))
            assert x is not None
            Psi[N - i] = x.T
        else:
            Psi[N - i] = Matrix.zeros(k[N - i - 1] if N - i - 1 >= 0 else 0, b[i] - k[i])
    Phi = {}
    for i in range(m + 1):
        j = N - i
        if i == m:
            if m % 2 == 0:
                Phi[i] = rnd.symmetric(c[i], p.middle_signature)
            else:
                Phi[i] = rnd.skew(c[i])
        else:
            Phi[i] = rnd.invertible(c[i], rational=True)
            Phi[j] = Phi[i].T.scale(sign(i * j))
    normal = {}
    for i in range(N + 1):
        j = N - i
        kk = k[i - 1] if i >= 1 else 0
        normal[i] = vstack(hstack(Matrix.zeros(c[i], b[j] - k[j]), Phi[i]),
                           hstack(Psi[i], rnd.matrix(kk, c[j])))
    # convert to the canonical cone coordinates of iota
    model = cone_model(iota)
    blocks = {}
    for i in range(N + 1):
        ci = c[i]
        coker_t = hstack(Matrix.zeros(ci, b[i] - k[i]), Matrix.identity(ci)) @ model.coker[i].section
        ker_t = solve(kb(i - 1), model.kernel[i - 1]) if i >= 1 else Matrix.zeros(0, 0)
        assert ker_t is not None
        T = block_diagonal(coker_t, ker_t)
        blocks[i] = T.T @ normal[i]
    L = GradedPairing(model.space, M, N, blocks)
    return GlobalDatum(M, iota, L)


def _conj(source_q, target_q, f: GradedMap) -> GradedMap:
    blocks = {}
    for i in f.source.degrees():
        blocks[i] = target_q(i + f.shift) @ f.block(i) @ inverse(source_q(i))
    return GradedMap(f.source, f.target, f.shift, blocks)


def _conj_pairing(left_q, right_q, g: GradedPairing) -> GradedPairing:
    return GradedPairing(g.left, g.right, g.total,
                         {i: inverse(left_q(i)).T @ g.block(i) @ inverse(right_q(g.total - i))
                          for i in g.left.degrees()})


def change_basis(inst: Instance, qb: Mapping[int, Matrix] | None = None,
                 qp: Mapping[str, Mapping[int, Matrix]] | None = None,
                 qrel: Mapping[str, Mapping[int, Matrix]] | None = None,
                 qm: Mapping[int, Matrix] | None = None) -> Instance:
    """Re-express an instance in new bases (new coordinates = q @ old coordinates).

    The relative space of the complement is always re-derived from iota, so the
    Lefschetz pairing is transported through the induced map on cone coordinates.
    """
    t, g = inst.tube, inst.glob
    qb, qm, qp, qrel = qb or {}, qm or {}, qp or {}, qrel or {}

    def getter(table, space):
        return lambda i: table.get(i, Matrix.identity(space.dim(i)))

    QB = getter(qb, t.B)
    ladders = {}
    for x in t.perversities:
        lad = t.ladder(x)
        QP, QR = getter(qp.get(x, {}), lad.P), getter(qrel.get(x, {}), lad.P_rel)
        ladders[x] = (lad, QP, QR)
    new_ladders = {}
    for x, (lad, QP, QR) in ladders.items():
        QRd = ladders["p" if t.witt else dual(x)][2]
        new_ladders[x] = Ladder(
            lad.P, lad.P_rel,
            _conj(QB, QP, lad.b_to_p),
            _conj(QP, QR, lad.p_to_rel),
            _conj(QR, QB, lad.rel_bdry),
            _conj_pairing(QP, QRd, lad.D_abs_rel),
        )
    tube = TubeDatum(t.N, t.witt, t.B, _conj_pairing(QB, QB, t.D_bdry), new_ladders)

    QM = getter(qm, g.M)
    iota = _conj(QB, QM, g.iota)
    old, new = relative_model(g), cone_model(iota)
    blocks = {}
    for i in new.space.degrees():
        coker_t = old.coker[i].proj @ inverse(QM(i)) @ new.coker[i].section
        ker_t = solve(old.kernel[i - 1], inverse(QB(i - 1)) @ new.kernel[i - 1]) if new.kernel[i - 1].cols \
            else Matrix.zeros(old.kernel[i - 1].cols, 0)
        assert ker_t is not None
        T = block_diagonal(coker_t, ker_t)
        blocks[i] = T.T @ g.lefschetz.block(i) @ inverse(QM(g.lefschetz.total - i))
    L = GradedPairing(new.space, g.M, g.lefschetz.total, blocks)
    return replace(inst, tube=tube, glob=GlobalDatum(g.M, iota, L), approximations={})


def scramble(inst: Instance, rnd: _Rand) -> Instance:
    t, g = inst.tube, inst.glob
    qb = {i: rnd.invertible(t.B.dim(i)) for i in t.B.degrees()}
    qp = {x: {i: rnd.invertible(t.ladder(x).P.dim(i)) for i in t.B.degrees()} for x in t.perversities}
    qr = {x: {i: rnd.invertible(t.ladder(x).P_rel.dim(i)) for i in t.B.degrees()} for x in t.perversities}
    qm = {i: rnd.invertible(g.M.dim(i)) for i in g.M.degrees()}
    return change_basis(inst, qb, qp, qr, qm)


@dataclass(frozen=True)
class MutationSite:
    path: str
    degree: int
    row: int
    col: int

    def __str__(self) -> str:
        return f"{self.path}[{self.degree}]({self.row},{self.col})"


@dataclass(frozen=True)
class MutationResult:
    instance: Instance
    site: MutationSite | None
    delta: Fraction = Fraction(0)

    @property
    def mutated(self) -> bool:
        return self.site is not None


def _block_tables(inst: Instance) -> list[tuple[str, object]]:
    t, g = inst.tube, inst.glob
    out: list[tuple[str, object]] = [("tube.D_bdry", t.D_bdry)]
    for x in t.perversities:
        lad = t.ladder(x)
        for name in ("b_to_p", "p_to_rel", "rel_bdry", "D_abs_rel"):
            out.append((f"tube.{x}.{name}", getattr(lad, name)))
    out += [("complement.iota", g.iota), ("complement.lefschetz", g.lefschetz)]
    return out


def mutation_sites(inst: Instance) -> list[MutationSite]:
    sites = []
    for path, obj in _block_tables(inst):
        for i in obj.source.degrees() if isinstance(obj, GradedMap) else obj.left.degrees():
            blk = obj.block(i)
            sites += [MutationSite(path, i, r, c) for r in range(blk.rows) for c in range(blk.cols)]
    return sites


def apply_delta(inst: Instance, site: MutationSite, delta: Fraction) -> Instance:
    t, g = inst.tube, inst.glob

    def bump(obj):
        blk = obj.block(site.degree)
        blocks = dict(obj.blocks)
        blocks[site.degree] = blk.with_entry(site.row, site.col, blk[site.row, site.col] + delta)
        return replace(obj, blocks=blocks)

    path = site.path.split(".")
    if path[0] == "complement":
        attr = {"iota": "iota", "lefschetz": "lefschetz"}[path[1]]
        return replace(inst, glob=replace(g, **{attr: bump(getattr(g, attr))}))
    if path[1] == "D_bdry":
        return replace(inst, tube=replace(t, D_bdry=bump(t.D_bdry)))
    x, name = path[1], path[2]
    lad = t.ladder(x)
    ladders = dict(t.ladders)
    ladders[x] = replace(lad, **{name: bump(getattr(lad, name))})
    return replace(inst, tube=replace(t, ladders=ladders))


def mutate_instance(inst: Instance, seed: int) -> MutationResult:
    """Perturb one matrix entry by a nonzero rational; a no-op on instances with no entries."""
    sites = mutation_sites(inst)
    if not sites:
        return MutationResult(inst, None)
    rng = random.Random(seed)
    site = rng.choice(sites)
    num = rng.choice([n for n in range(-5, 6) if n])
    delta = Fraction(num, rng.randint(1, 4))
    return MutationResult(apply_delta(inst, site, delta), site, delta)
