"""Embedded instances: the pinched torus (real dimension 4) and the empty instance.

Pinched torus expectations (reduced homology, degrees 0..4):
  Z = [1, 0, 1, 0], obstructions vanish in every degree, H_ix = [0, 1, 0, 1, 0],
  both middle signatures are 0.  For contrast, the homology of the AF
  intersection space pair vanishes identically while H_1 of the algebraic
  intersection space does not.
"""
from __future__ import annotations

from .generate import change_basis
from .globalspace import GlobalDatum
from .graded import GradedMap, GradedPairing, GradedSpace, cone_model
from .instance import Instance
from .linalg import Matrix
from .tube import Ladder, TubeDatum

FIXTURES = ("pinched-torus", "empty")


def _space(*dims: int) -> GradedSpace:
    return GradedSpace(0, len(dims) - 1, dims)


def pinched_torus() -> Instance:
    N = 4
    B = _space(1, 1, 1, 1, 0)
    P = _space(1, 0, 2, 0, 0)
    Prel = _space(0, 0, 2, 0, 1)
    one = Matrix([[1]])
    D_bdry = GradedPairing(B, B, N - 1, {i: one for i in range(4)})
    ladder = Ladder(
        P, Prel,
        GradedMap(B, P, 0, {0: one, 2: Matrix([[1], [0]])}),
        GradedMap(P, Prel, 0, {2: Matrix([[0, 1], [0, 0]])}),
        GradedMap(Prel, B, -1, {2: Matrix([[0, 1]]), 4: one}),
        GradedPairing(P, Prel, N, {0: one, 2: Matrix([[0, 1], [1, 0]])}),
    )
    tube = TubeDatum(N, True, B, D_bdry, {"p": ladder})
    M = _space(1, 1, 0, 0, 0)
    iota = GradedMap(B, M, 0, {0: one, 1: one})
    R = cone_model(iota).space
    L = GradedPairing(R, M, N, {3: Matrix([[-1]]), 4: one})
    inst = Instance("pinched-torus", tube, GlobalDatum(M, iota, L))
    # non-elementary bases in degree 2 so that no single entry is a free parameter
    return change_basis(inst, qp={"p": {2: Matrix([[1, 1], [1, 2]])}},
                        qrel={"p": {2: Matrix([[2, 1], [1, 1]])}})


def empty(N: int = 4) -> Instance:
    z = GradedSpace.zero(0, N)
    tube = TubeDatum(N, True, z, GradedPairing(z, z, N - 1),
                     {"p": Ladder(z, z, GradedMap(z, z), GradedMap(z, z), GradedMap(z, z, -1),
                                  GradedPairing(z, z, N))})
    iota = GradedMap(z, z)
    return Instance("empty", tube, GlobalDatum(z, iota, GradedPairing(cone_model(iota).space, z, N)))


def emit_fixture(name: str) -> Instance:
    if name == "pinched-torus":
        return pinched_torus()
    if name == "empty":
        return empty()
    raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
