"""nu groups: rho maps, the central kernel mu, and the diagonal subgroup."""

from __future__ import annotations

import pytest

from etacalc.abelian import delta_of_abelian
from etacalc.eta import check_decomposition
from etacalc.groups import builtin, cyclic, symmetric3
from etacalc.nu import check_derived_decomposition, construct_nu
from etacalc.perm import abelian_invariants_of


def test_nu_c2():
    nu = construct_nu(cyclic(2))
    assert nu.order() == 8
    assert nu.tensor_order() == 2
    assert nu.mu.order() == 2
    assert nu.delta.order() == 2
    assert check_decomposition(nu.eta)["ok"]
    report = check_derived_decomposition(nu)
    assert report["ok"]
    assert report["derived_order"] == 2  # abelian G, so just the tensor part


def test_nu_c4():
    nu = construct_nu(cyclic(4))
    assert nu.order() == 64
    assert nu.tensor_order() == 4
    # abelian group: the bracket map kills everything
    assert nu.mu.order() == 4
    assert nu.rho_prime.image_group().is_trivial()
    assert nu.delta.order() == delta_of_abelian(cyclic(4).abelian_invariants()).order
    assert tuple(abelian_invariants_of(nu.delta)) == (4,)


def test_nu_c2xc4_delta_matches_formula():
    group = builtin("C2xC4")
    nu = construct_nu(group)
    expected = delta_of_abelian(group.abelian_invariants())
    assert nu.delta.order() == expected.order
    assert tuple(abelian_invariants_of(nu.delta)) == tuple(expected)


def test_nu_s3():
    s3 = symmetric3()
    nu = construct_nu(s3)
    assert nu.order() == nu.tensor_order() * 36
    # the bracket map covers the derived subgroup with central kernel mu
    assert nu.rho_prime.image_group().order() == 3
    assert nu.tensor_order() == nu.mu.order() * 3
    for m in nu.mu.generators:
        for c in nu.carrier.generators:
            assert m.conj(c) == m
    report = check_derived_decomposition(nu)
    assert report["ok"]
    assert report["derived_order"] == nu.tensor_order() * 9
    abelianized = delta_of_abelian(s3.abelian_invariants()).order
    assert nu.delta.order() % abelianized == 0


def test_rho_restricts_to_both_copies():
    nu = construct_nu(cyclic(4))
    for a in range(4):
        assert nu.rho.apply(nu.eta.embed_g[a]) == nu.reg_perms[a]
        assert nu.rho.apply(nu.eta.embed_h[a]) == nu.reg_perms[a]


def test_rho_prime_sends_brackets_to_commutators():
    s3 = symmetric3()
    nu = construct_nu(s3)
    for a in range(6):
        for b in range(6):
            image = nu.rho_prime.apply(nu.eta.tensor(a, b))
            assert image == nu.reg_perms[s3.comm(a, b)]


def test_mu_elements_map_to_identity():
    nu = construct_nu(builtin("D8"))
    for m in nu.mu.generators:
        assert nu.rho_prime.apply(m).is_identity()
    assert nu.tensor_order() == nu.mu.order() * len(builtin("D8").derived_indices())


def test_nu_trivial_group():
    nu = construct_nu(cyclic(1))
    assert nu.order() == 1
    assert nu.mu.order() == 1
    assert nu.delta.order() == 1
    assert check_derived_decomposition(nu)["ok"]


def test_nu_quaternion():
    q8 = builtin("Q8")
    nu = construct_nu(q8)
    assert nu.order() == nu.tensor_order() * 64
    assert nu.rho_prime.image_group().order() == 2
    assert nu.tensor_order() == nu.mu.order() * 2
    assert check_derived_decomposition(nu)["ok"]
