from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from isx.approximation import default_approximation, obstructions_vanish
from isx.fixtures import empty, pinched_torus
from isx.generate import GenProfile, generate_instance
from isx.globalspace import global_duality, intersection_space, validate_global
from isx.graded import GradedPairing
from isx.pairing import default_sections, paired_family, random_sections
from isx.report import PreconditionError
from isx.tube import dual
from oracles import det, minor_rank


def models(inst):
    t = inst.tube
    return {x: intersection_space(t, inst.glob, default_approximation(t, x)) for x in ("p", "q")}


def families(ix_p, ix_q, seed=0):
    """Three distinct section families for the pair (ix_p, ix_q)."""
    return [
        paired_family(default_sections(ix_p), default_sections(ix_q)),
        paired_family(random_sections(ix_p, seed), random_sections(ix_q, seed + 1)),
        paired_family(random_sections(ix_p, seed + 2), default_sections(ix_q)),
    ]


def test_fixture_global_valid():
    inst = pinched_torus()
    assert validate_global(inst.tube, inst.glob).ok
    assert inst.validate().ok


def test_fixture_sign_flip_invalid():
    inst = pinched_torus()
    L = inst.glob.lefschetz
    blocks = dict(L.blocks)
    blocks[3] = blocks[3].scale(-1)
    bad = replace(inst.glob, lefschetz=GradedPairing(L.left, L.right, L.total, blocks))
    report = validate_global(inst.tube, bad)
    assert not report.ok
    assert {f.check for f in report} <= {"square iota / delta", "square j / j", "square delta / iota"}


def test_fixture_intersection_space():
    inst = pinched_torus()
    ix = models(inst)["p"]
    assert ix.space.dims == (0, 1, 0, 1, 0)
    assert ix.relation_failures() == []
    # B -> M has rank 2 and f picks the degree 0 and 2 classes
    assert [minor_rank(ix.phi.block(i)) for i in range(5)] == [1, 0, 0, 0, 0]


def test_fixture_global_duality():
    inst = pinched_torus()
    ix = models(inst)["p"]
    P = global_duality(ix, ix, default_sections(ix))
    assert P.block(1).shape == (1, 1) and P.block(3).shape == (1, 1)
    assert det(P.block(1).tolist()) and det(P.block(3).tolist())
    assert all(P.block(r).shape == (0, 0) for r in (0, 2, 4))


def test_zero_approximation_gives_complement():
    # B = 0 forces A = 0, and then the intersection space is the complement
    prof = GenProfile(4, 2, (0, 0, 0, 0), (0,) * 5, (0, 0, 0, 0), (1, 0, 2, 0, 1))
    inst = generate_instance(prof)
    assert inst.validate().ok
    ix = models(inst)["p"]
    assert ix.space == inst.glob.M
    assert ix.h.ranks() == {i: inst.glob.M.dim(i) for i in range(5)}


def test_empty_instance_pairing_is_empty():
    inst = empty()
    ix = models(inst)["p"]
    assert ix.space.total_dim == 0
    P = global_duality(ix, ix, default_sections(ix))
    assert all(P.block(r).shape == (0, 0) for r in P.degrees())


@pytest.mark.parametrize("seed", range(4))
def test_obstructed_instance_refused(seed):
    inst = generate_instance(GenProfile.random(seed, 4, adversarial=True))
    ix = models(inst)["p"]
    with pytest.raises(PreconditionError):
        global_duality(ix, ix, default_sections(ix))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 4, 6]), st.booleans(), st.booleans())
def test_generated_global_part(seed, N, witt, adversarial):
    inst = generate_instance(GenProfile.random(seed, N, adversarial, witt))
    assert validate_global(inst.tube, inst.glob).ok
    ms = models(inst)
    for x in inst.tube.perversities:
        ix = ms[x]
        assert ix.relation_failures() == []
        for i in ix.space.degrees():
            phi = ix.phi.block(i)
            prev = ix.phi.block(i - 1)
            assert ix.space.dim(i) == phi.rows - minor_rank(phi) + prev.cols - minor_rank(prev)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 4, 6]), st.booleans())
def test_global_duality_three_families(seed, N, witt):
    inst = generate_instance(GenProfile.random(seed, N, False, witt))
    t = inst.tube
    ms = models(inst)
    assert obstructions_vanish(t, ms["p"].approximation, ms["q"].approximation).vanish
    for x in t.perversities:
        ix_p, ix_q = ms[x], ms[dual(x) if not t.witt else x]
        grams = []
        for fam in families(ix_p, ix_q, seed):
            P = global_duality(ix_p, ix_q, fam)
            for r in ix_p.space.degrees():
                assert ix_p.space.dim(r) == ix_q.space.dim(N - r)
                assert minor_rank(P.block(r)) == ix_p.space.dim(r)
            grams.append(P)
        # distinct families, same dimensions
        assert len({tuple(P.left.dims) for P in grams}) == 1
