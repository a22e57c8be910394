import itertools
import random

import pytest

from delooper.abelian import PresentedGroup
from delooper.intlin import Mat
from delooper.moore import ChainComplex, dold_kan
from delooper.simplicial import BASE, enumerate_pointed_maps, sphere, standard_simplex, zero_sphere
from delooper.star import (
    AbelianTarget,
    TargetMap,
    check_condition_star,
    check_functoriality,
    codiscrete_target,
    conjugation_hom,
    identity_hom,
    induced_hom,
    is_strictly_multiplicative,
    milnor_F,
    power_hom,
    retraction_mbar,
    star,
    word_inv,
    word_mul,
    word_reduce,
)


def loop_target(order, cap, degree=1):
    groups = [PresentedGroup.free(0)] * (cap + 1)
    groups = list(groups)
    groups[degree] = PresentedGroup.cyclic(order)
    diffs = {m: Mat(groups[m - 1].ngens, groups[m].ngens) for m in range(1, cap + 1)}
    return AbelianTarget(dold_kan(ChainComplex(groups=groups, diffs=diffs), cap))


def all_target_maps(A, K):
    out = []
    nondeg = {n: [x for x in A.nondegenerate(n) if x != BASE] for n in range(A.cap + 1)}

    def rec(n, tables):
        if n > A.cap:
            tm = TargetMap(src=A, target=K, tables=[dict(t) for t in tables])
            if tm.is_valid():
                out.append(tm)
            return
        table = {BASE: K.identity(n)}
        if n > 0:
            for j in range(n):
                for x in A.elements[n - 1]:
                    table[A.degeneracy(n - 1, j, x)] = K.degeneracy(n - 1, j, tables[n - 1][x])
        cells = nondeg[n]

        def choose(idx, tbl):
            if idx == len(cells):
                rec(n + 1, tables + [tbl])
                return
            x = cells[idx]
            for y in K.elements(n):
                ok = True
                if n > 0:
                    for i in range(n + 1):
                        if tables[n - 1][A.face(n, i, x)] != K.face(n, i, y):
                            ok = False
                            break
                if ok:
                    t2 = dict(tbl)
                    t2[x] = y
                    choose(idx + 1, t2)

        choose(0, table)

    rec(0, [])
    return out


def test_word_arithmetic():
    assert word_reduce([("a", 1), ("a", -1)]) == ()
    assert word_mul((("a", 1),), (("a", -1), ("b", 1))) == (("b", 1),)
    w = (("a", 1), ("b", -1))
    assert word_mul(w, word_inv(w)) == ()


def test_milnor_f_ranks():
    FS0 = milnor_F(zero_sphere(3))
    assert [len(FS0.generators(n)) for n in range(4)] == [1, 1, 1, 1]
    FS1 = milnor_F(sphere(1, 3))
    assert [len(FS1.generators(n)) for n in range(4)] == [0, 1, 2, 3]
    Fpt = milnor_F(standard_simplex(0, 2))
    assert all(len(Fpt.generators(n)) == 0 for n in range(3))


def test_mbar_evaluation():
    K = loop_target(5, 2)
    x = next(v for v in K.elements(1) if v != K.identity(1))
    assert retraction_mbar(K, 1, [(x, 1)]) == x
    assert retraction_mbar(K, 1, []) == K.identity(1)
    triple = retraction_mbar(K, 1, [(x, 1), (x, 1), (x, 1)])
    assert triple == K.canon(1, [3 * v for v in x])


def test_mbar_retracts_generators():
    """m-bar composed with the generator inclusion is the identity."""
    cap = 2
    K = loop_target(4, cap)
    for n in range(cap + 1):
        for x in K.elements(n):
            assert retraction_mbar(K, n, [(x, 1)]) == x


def test_mbar_nonabelian_fold():
    elems = ["e", "r", "rr"]
    mult = {}
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mult[(a, b)] = elems[(i + j) % 3]
    inv = {"e": "e", "r": "rr", "rr": "r"}
    K = codiscrete_target(elems, mult, inv, "e", 2)
    assert K.verify() is None
    a = ("r", "e")
    b = ("rr", "r")
    assert retraction_mbar(K, 1, [(a, 1), (b, 1)]) == ("e", "r")
    assert retraction_mbar(K, 1, [(a, -1)]) == ("rr", "e")


def test_fact_3_3_exact_on_model_corpus():
    """star(F(abar), g) = g . abar for every simplicial map between the
    circle and interval models and every target map."""
    cap = 3
    models = {"S1": sphere(1, cap), "D1": standard_simplex(1, cap)}
    K = loop_target(4, cap)
    target_maps = {name: all_target_maps(M, K) for name, M in models.items()}
    checked = 0
    for name_a, A in models.items():
        for name_b, B in models.items():
            FA, FB = milnor_F(A), milnor_F(B)
            for abar in enumerate_pointed_maps(A, B):
                F_abar = induced_hom(FA, FB, abar)
                assert F_abar.is_valid()
                for g in target_maps[name_b]:
                    st = star(F_abar, g, K)
                    for n in range(cap + 1):
                        for a in FA.generators(n):
                            assert st(n, a) == g(n, abar(n, a))
                            checked += 1
    assert checked > 50


def test_star_identity_hom_is_identity():
    cap = 2
    S1 = sphere(1, cap)
    F = milnor_F(S1)
    K = loop_target(6, cap)
    for g in all_target_maps(S1, K):
        st = star(identity_hom(F), g, K)
        for n in range(cap + 1):
            for a in F.generators(n):
                assert st(n, a) == g(n, a)


def test_star_power_map_gives_multiples():
    cap = 2
    S1 = sphere(1, cap)
    F = milnor_F(S1)
    K = loop_target(6, cap)
    g = next(m for m in all_target_maps(S1, K) if any(m(1, x) != K.identity(1) for x in F.generators(1)))
    st = star(power_hom(F, 2), g, K)
    for n in range(cap + 1):
        for a in F.generators(n):
            v = g(n, a)
            assert st(n, a) == K.mul(n, v, v)


def test_condition_star_strict_targets():
    cap = 2
    S1 = sphere(1, cap)
    F = milnor_F(S1)
    K = loop_target(4, cap)
    maps = all_target_maps(S1, K)
    homs = [identity_hom(F), power_hom(F, 2), power_hom(F, -1)]
    homs += [induced_hom(F, F, e) for e in enumerate_pointed_maps(S1, S1)]
    for f in homs:
        for g in homs:
            for h in maps:
                ok, witness = check_condition_star(f, g, h, K)
                assert ok, witness


def test_condition_star_nonabelian():
    elems = ["e", "r", "rr", "s", "sr", "srr"]
    perm = {"e": (0, 1, 2), "r": (1, 2, 0), "rr": (2, 0, 1), "s": (0, 2, 1), "sr": (2, 1, 0), "srr": (1, 0, 2)}
    names = {v: k for k, v in perm.items()}
    mult = {(a, b): names[tuple(perm[a][perm[b][i]] for i in range(3))] for a in elems for b in elems}
    inv = {a: next(b for b in elems if mult[(a, b)] == "e") for a in elems}
    K = codiscrete_target(elems, mult, inv, "e", 2)
    D1 = standard_simplex(1, 2)
    F = milnor_F(D1)
    maps = all_target_maps(D1, K)
    assert len(maps) == 6
    for f in (identity_hom(F), power_hom(F, 2)):
        for h in maps:
            ok, witness = check_condition_star(f, identity_hom(F), h, K)
            assert ok, witness


def test_free_functor_is_functorial():
    cap = 2
    S1 = sphere(1, cap)
    F = milnor_F(S1)
    ident = identity_hom(F)
    endos = enumerate_pointed_maps(S1, S1)
    for abar in endos:
        for bbar in endos:
            Fa = induced_hom(F, F, abar)
            Fb = induced_hom(F, F, bbar)
            comp_tables = [
                {x: bbar(n, abar(n, x)) for x in S1.elements[n]} for n in range(cap + 1)
            ]
            from delooper.simplicial import SimplicialSetMap

            Fba = induced_hom(F, F, SimplicialSetMap(S1, S1, comp_tables))
            composite = Fb.compose(Fa)
            for n in range(cap + 1):
                for g in F.generators(n):
                    assert composite.apply(n, ((g, 1),)) == Fba.apply(n, ((g, 1),))
    for n in range(cap + 1):
        for g in F.generators(n):
            assert ident.apply(n, ((g, 1),)) == ((g, 1),)


def test_conjugation_hom_valid_on_pointed_interval():
    D1 = standard_simplex(1, 2)
    F = milnor_F(D1)
    v = F.generators(0)[0]
    c = conjugation_hom(F, ((v, 1),))
    assert c.is_valid()


def test_functoriality_identities():
    cap = 2
    S1 = sphere(1, cap)
    F = milnor_F(S1)
    K = loop_target(4, cap)
    L = loop_target(4, cap)
    maps = all_target_maps(S1, K)

    class Scale:
        def __init__(self, k):
            self.k = k

        def __call__(self, n, x):
            return K.canon(n, [self.k * v for v in x])

    h = Scale(3)
    for e in (identity_hom(F), power_hom(F, 2)):
        for f in (identity_hom(F), power_hom(F, -1)):
            for g in maps[:3]:
                assert check_functoriality(e, f, g, h, K, L)


def test_functoriality_rejects_non_multiplicative():
    cap = 2
    S1 = sphere(1, cap)
    F = milnor_F(S1)
    K = loop_target(5, cap)
    maps = all_target_maps(S1, K)

    class Shift:
        def __call__(self, n, x):
            # translation by a fixed nonzero element is not multiplicative
            e = list(K.identity(n))
            if n == 1:
                nonzero = next(v for v in K.elements(1) if v != K.identity(1))
                return K.mul(1, x, nonzero)
            return x

    ok, _ = is_strictly_multiplicative(Shift(), K, K)
    assert not ok
    with pytest.raises(ValueError):
        check_functoriality(identity_hom(F), identity_hom(F), maps[0], Shift(), K, K)
