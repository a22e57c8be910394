import random

import pytest

from delooper.abelian import PresentedGroup
from delooper.delta_core import free_abelian, underlying_delta, verify_identities
from delooper.generators import (
    random_fibrant_strict_object,
    random_resolution_grid,
    random_small_strict_object,
)
from delooper.intlin import Mat
from delooper.moore import (
    ChainComplex,
    certify_collapse,
    chain_homology_factors,
    constant_vertical,
    diagonal,
    dold_kan,
    double_moore_total_complex,
    e2_page,
    external_product,
    homotopy_groups,
    moore_complex,
)
from delooper.simplicial import sphere, standard_simplex


def test_moore_of_circle():
    F = free_abelian(sphere(1, 4))
    mc = moore_complex(F)
    pis = homotopy_groups(F)
    assert pis[1] == (0,)
    assert pis[0] == () and pis[2] == () and pis[3] == ()
    # the Moore term at degree 1 is exactly Z, and vanishes above
    assert mc.complex.groups[1].invariant_factors() == (0,)
    assert mc.complex.groups[0].invariant_factors() == ()
    assert mc.complex.groups[2].invariant_factors() == ()
    assert mc.complex.groups[3].invariant_factors() == ()


def test_moore_of_two_sphere():
    F = free_abelian(sphere(2, 4))
    pis = homotopy_groups(F)
    assert pis[2] == (0,)
    assert pis[0] == () and pis[1] == () and pis[3] == ()


def test_simplex_is_acyclic():
    F = free_abelian(standard_simplex(2, 4))
    pis = homotopy_groups(F)
    assert all(pis[n] == () for n in range(4))


def test_constant_object_concentrated_in_degree_zero():
    A = PresentedGroup.from_factors([6, 0])
    cpx = ChainComplex(
        groups=[A, PresentedGroup.free(0), PresentedGroup.free(0)],
        diffs={1: Mat(2, 0, [[], []]), 2: Mat(0, 0, [])},
    )
    G = dold_kan(cpx, 2)
    pis = homotopy_groups(G)
    assert pis[0] == (6, 0)
    assert pis[1] == ()


def test_zero_object():
    cpx = ChainComplex(groups=[PresentedGroup.free(0)] * 3, diffs={1: Mat(0, 0, []), 2: Mat(0, 0, [])})
    G = dold_kan(cpx, 2)
    assert homotopy_groups(G) == homotopy_groups(G)
    assert all(homotopy_groups(G)[n] == () for n in range(2))


def test_reliable_range_enforced():
    F = free_abelian(sphere(1, 3))
    with pytest.raises(ValueError):
        homotopy_groups(F, degrees=[3])


def test_dold_kan_inverts_homology():
    rng = random.Random(21)
    for _ in range(6):
        cap = rng.choice([2, 3])
        groups = [PresentedGroup.from_factors([rng.choice([0, 2, 3, 4])]) if rng.random() < 0.7 else PresentedGroup.free(0) for _ in range(cap + 1)]
        diffs = {n: Mat(groups[n - 1].ngens, groups[n].ngens) for n in range(1, cap + 1)}
        cpx = ChainComplex(groups=groups, diffs=diffs)
        G = dold_kan(cpx, cap)
        assert verify_identities(G).ok
        pis = homotopy_groups(G)
        for n in range(cap):
            assert pis[n] == groups[n].invariant_factors()


def test_dold_kan_counit_consistency():
    """Extending the face-only restriction freely does not change homotopy."""
    from delooper.delta_core import free_degeneracy_extension

    rng = random.Random(31)
    for _ in range(6):
        W = random_small_strict_object(rng, rng.choice([2, 3]))
        V = underlying_delta(W)
        ext = free_degeneracy_extension(V)
        assert homotopy_groups(ext.object) == homotopy_groups(W)


def test_diagonal_of_vertically_constant():
    F = free_abelian(sphere(1, 3))
    B = constant_vertical(F, 3)
    D = diagonal(B)
    assert verify_identities(D).ok
    assert homotopy_groups(D) == homotopy_groups(F)


def test_diagonal_of_torus_product():
    F = free_abelian(sphere(1, 3))
    B = external_product(F, F)
    assert not B.verify()
    D = diagonal(B)
    pis = homotopy_groups(D)
    assert pis[2] == (0,)
    assert pis[0] == () and pis[1] == ()
    tot = double_moore_total_complex(B)
    assert chain_homology_factors(tot, range(3)) == pis


def test_eilenberg_zilber_randomized():
    rng = random.Random(41)
    for _ in range(5):
        A = random_small_strict_object(rng, 2)
        Bv = random_small_strict_object(rng, 2)
        grid = external_product(A, Bv)
        D = diagonal(grid)
        top = D.cap
        pis = homotopy_groups(D, range(top))
        tot = double_moore_total_complex(grid)
        assert chain_homology_factors(tot, range(top)) == pis


def test_e2_vertically_constant():
    F = free_abelian(sphere(1, 3))
    B = constant_vertical(F, 2)
    page = e2_page(B, smax=2, tmax=1)
    pis = homotopy_groups(F)
    for s in range(3):
        assert page.entries[(s, 0)] == pis[s]
        assert page.entries[(s, 1)] == ()


def test_e2_resolution_collapse():
    rng = random.Random(51)
    B, H, G = random_resolution_grid(rng)
    page = e2_page(B)
    assert page.collapsed
    holds, detail = certify_collapse(B, page)
    assert holds, detail


def test_e2_zero_grid():
    zero = PresentedGroup.free(0)
    cpx = ChainComplex(groups=[zero] * 3, diffs={1: Mat(0, 0, []), 2: Mat(0, 0, [])})
    Z = dold_kan(cpx, 2)
    B = external_product(Z, Z)
    page = e2_page(B)
    assert page.collapsed
    assert all(f == () for f in page.entries.values())


def test_e2_window_bounds():
    F = free_abelian(sphere(1, 2))
    B = constant_vertical(F, 2)
    with pytest.raises(ValueError):
        e2_page(B, smax=2, tmax=2)
