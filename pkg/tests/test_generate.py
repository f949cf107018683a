from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from isx.approximation import default_approximation, obstructions_vanish
from isx.fixtures import empty, pinched_torus
from isx.generate import GenProfile, apply_delta, generate_instance, mutate_instance, mutation_sites
from isx.io import dump_instance
from isx.tube import compute_ZY


def test_deterministic():
    a = generate_instance(GenProfile.random(42, 6))
    b = generate_instance(GenProfile.random(42, 6))
    assert a == b and dump_instance(a) == dump_instance(b)
    assert GenProfile.random(42, 6) != GenProfile.random(43, 6)


def test_all_zero_profile():
    prof = GenProfile(4, 0, (0,) * 4, (0,) * 5, (0,) * 4, (0,) * 5)
    inst = generate_instance(prof)
    assert inst.validate().ok
    assert inst.tube.B.total_dim == 0 and inst.glob.M.total_dim == 0


def test_prescribed_z_profile():
    # z = [1, 2, 0, 0] gives B = z + reversed z = [1, 2, 2, 1]
    prof = GenProfile(4, 1, (1, 2, 0, 0), (0, 1, 0, 1, 0), (1, 2, 0, 0), (1, 0, 0, 0, 1))
    assert prof.problems() == [] and prof.boundary_dims() == [1, 2, 2, 1]
    inst = generate_instance(prof)
    assert inst.validate().ok
    assert compute_ZY(inst.tube, "p").z_space.dims[:4] == (1, 2, 0, 0)


@pytest.mark.parametrize("bad, fragment", [
    (dict(N=3), "even dimension"),
    (dict(z_profile=(1, 0)), "z_profile must have 4 entries"),
    (dict(kernel_profile=(1, 1, 0, 0)), "kernel_profile"),
    (dict(coker_profile=(1, 0, 0, 0, 0)), "coker_profile must be symmetric"),
    (dict(extra_profile=(1, 0, 0, 0, 0)), "extra_profile must be symmetric"),
    (dict(coker_profile=(0, 0, 1, 0, 0), middle_signature=3), "middle_signature"),
])
def test_inconsistent_profiles_rejected(bad, fragment):
    base = dict(N=4, seed=0, z_profile=(1, 0, 0, 0), extra_profile=(0,) * 5, kernel_profile=(1, 0, 0, 0),
                coker_profile=(0,) * 5)
    prof = GenProfile(**{**base, **bad})
    assert any(fragment in p for p in prof.problems())
    with pytest.raises(ValueError):
        generate_instance(prof)


def test_non_witt_needs_dual_profile():
    prof = GenProfile(4, 0, (1, 0, 0, 0), (0,) * 5, (1, 0, 0, 0), (0,) * 5, witt=False)
    assert prof.problems() == ["non-Witt profiles need z_dual_profile"]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 4, 6, 8]), st.booleans(), st.booleans())
def test_random_profiles_valid(seed, N, witt, adversarial):
    prof = GenProfile.random(seed, N, adversarial, witt)
    assert prof.problems() == []
    inst = generate_instance(prof)
    assert inst.validate().ok
    assert inst.N == N and inst.witt == witt


def test_adversarial_coverage():
    failing = 0
    for seed in range(40):
        t = generate_instance(GenProfile.random(seed, 6, adversarial=True)).tube
        a = default_approximation(t, "p")
        failing += not obstructions_vanish(t, a, a).vanish
    assert failing >= 20


def test_mutating_empty_is_noop():
    inst = empty()
    assert mutation_sites(inst) == []
    res = mutate_instance(inst, 7)
    assert not res.mutated and res.instance == inst


def test_mutation_changes_one_entry_and_reverts():
    inst = pinched_torus()
    res = mutate_instance(inst, 3)
    assert res.mutated and res.delta != 0
    assert not res.instance.validate().ok
    back = apply_delta(res.instance, res.site, -res.delta)
    assert back == inst and back.validate().ok


def test_mutation_sites_cover_every_entry():
    inst = pinched_torus()
    sites = mutation_sites(inst)
    assert len(sites) == len(set(sites))
    for site in sites:
        assert not apply_delta(inst, site, Fraction(1)).validate().ok, str(site)
