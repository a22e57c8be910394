"""The levelwise free group on a pointed simplicial set and the derived
composition built from its multiplication retraction.

Words are reduced tuples of (generator id, +-1). The retraction evaluates
a word in a simplicial group target by left-iterated multiplication; the
star of a group homomorphism F(A) -> F(B) against a map B -> K is the
generator restriction of the evaluated composite, and the associativity
condition linking two stars is checked exactly, levelwise, up to the cap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .simplicial import BASE, FiniteSimplicialSet


def word_reduce(letters):
    out = []
    for g, e in letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def word_mul(a, b):
    return word_reduce(list(a) + list(b))


def word_inv(a):
    return tuple((g, -e) for g, e in reversed(a))


class FreeSimplicialGroup:
    """Milnor's construction: level n is free on the non-basepoint n-simplices."""

    def __init__(self, base):
        self.base = base
        self.cap = base.cap

    def generators(self, n):
        return [x for x in self.base.elements[n] if x != BASE]

    def face_word(self, n, i, word):
        out = []
        for g, e in word:
            y = self.base.face(n, i, g)
            if y != BASE:
                out.append((y, e))
        return word_reduce(out)

    def degeneracy_word(self, n, j, word):
        out = []
        for g, e in word:
            y = self.base.degeneracy(n, j, g)
            if y != BASE:
                out.append((y, e))
        return word_reduce(out)


def milnor_F(K):
    return FreeSimplicialGroup(K)


@dataclass
class GroupHomMap:
    """Homomorphism of free simplicial groups, by generator images."""

    src: FreeSimplicialGroup
    dst: FreeSimplicialGroup
    tables: list  # per level, dict generator -> word in dst generators

    def apply(self, n, word):
        out = ()
        for g, e in word:
            img = self.tables[n][g]
            out = word_mul(out, img if e == 1 else word_inv(img))
        return out

    def is_valid(self):
        for n in range(self.src.cap + 1):
            for g in self.src.generators(n):
                if g not in self.tables[n]:
                    return False
        for n in range(1, self.src.cap + 1):
            for i in range(n + 1):
                for g in self.src.generators(n):
                    lhs = self.apply(n - 1, self.src.face_word(n, i, ((g, 1),)))
                    rhs = self.dst.face_word(n, i, self.apply(n, ((g, 1),)))
                    if lhs != rhs:
                        return False
        for n in range(0, self.src.cap):
            for j in range(n + 1):
                for g in self.src.generators(n):
                    lhs = self.apply(n + 1, self.src.degeneracy_word(n, j, ((g, 1),)))
                    rhs = self.dst.degeneracy_word(n, j, self.apply(n, ((g, 1),)))
                    if lhs != rhs:
                        return False
        return True

    def compose(self, other):
        """self after other."""
        tables = []
        for n in range(other.src.cap + 1):
            tables.append({g: self.apply(n, other.tables[n][g]) for g in other.src.generators(n)})
        return GroupHomMap(other.src, self.dst, tables)


def identity_hom(F):
    return GroupHomMap(F, F, [{g: ((g, 1),) for g in F.generators(n)} for n in range(F.cap + 1)])


def induced_hom(F_src, F_dst, simp_map):
    """F applied to a pointed simplicial map of the bases."""
    tables = []
    for n in range(F_src.cap + 1):
        table = {}
        for g in F_src.generators(n):
            y = simp_map(n, g)
            table[g] = ((y, 1),) if y != BASE else ()
        tables.append(table)
    return GroupHomMap(F_src, F_dst, tables)


class AbelianTarget:
    """A simplicial abelian group as a multiplicative target; elements are
    canonical coset vectors."""

    def __init__(self, sab):
        self.sab = sab
        self.cap = sab.cap

    def identity(self, n):
        return tuple(self.sab.levels[n].canon_vector([0] * self.sab.levels[n].ngens))

    def canon(self, n, v):
        return tuple(self.sab.levels[n].canon_vector(list(v)))

    def mul(self, n, a, b):
        return self.canon(n, [x + y for x, y in zip(a, b)])

    def inv(self, n, a):
        return self.canon(n, [-x for x in a])

    def face(self, n, i, a):
        return self.canon(n - 1, self.sab.face(n, i).apply(list(a)))

    def degeneracy(self, n, j, a):
        return self.canon(n + 1, self.sab.degeneracy(n, j).apply(list(a)))

    def elements(self, n):
        grp = self.sab.levels[n]
        if grp.order() is None:
            raise ValueError("cannot enumerate an infinite level")
        return [self.canon(n, v) for v in grp.elements()]

    def is_multiplicative_table(self):
        return True


@dataclass
class FiniteGroupLevel:
    elements: list
    mult: dict  # (a, b) -> ab
    inverse: dict
    identity: object

    def check(self):
        e = self.identity
        for a in self.elements:
            if self.mult[(a, e)] != a or self.mult[(e, a)] != a:
                return False
            if self.mult[(a, self.inverse[a])] != e:
                return False
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if self.mult[(self.mult[(a, b)], c)] != self.mult[(a, self.mult[(b, c)])]:
                        return False
        return True


class FiniteGroupTarget:
    """A levelwise finite (possibly nonabelian) simplicial group."""

    def __init__(self, levels, faces, degeneracies, cap):
        self.levels = levels  # FiniteGroupLevel per dimension
        self.faces = faces  # faces[n][i]: dict element -> element
        self.degeneracies = degeneracies
        self.cap = cap

    def identity(self, n):
        return self.levels[n].identity

    def mul(self, n, a, b):
        return self.levels[n].mult[(a, b)]

    def inv(self, n, a):
        return self.levels[n].inverse[a]

    def face(self, n, i, a):
        return self.faces[n][i][a]

    def degeneracy(self, n, j, a):
        return self.degeneracies[n][j][a]

    def elements(self, n):
        return list(self.levels[n].elements)

    def verify(self):
        for n, lvl in enumerate(self.levels):
            if not lvl.check():
                return f"level {n} is not a group"
        for n in range(1, self.cap + 1):
            for i in range(n + 1):
                t = self.faces[n][i]
                for a in self.levels[n].elements:
                    for b in self.levels[n].elements:
                        if t[self.mul(n, a, b)] != self.mul(n - 1, t[a], t[b]):
                            return f"d_{i} at level {n} is not a homomorphism"
        for n in range(0, self.cap):
            for j in range(n + 1):
                t = self.degeneracies[n][j]
                for a in self.levels[n].elements:
                    for b in self.levels[n].elements:
                        if t[self.mul(n, a, b)] != self.mul(n + 1, t[a], t[b]):
                            return f"s_{j} at level {n} is not a homomorphism"
        return None


def constant_finite_target(elements, mult, inverse, identity, cap):
    lvl = FiniteGroupLevel(elements=list(elements), mult=dict(mult), inverse=dict(inverse), identity=identity)
    ident = {x: x for x in elements}
    faces = {n: [dict(ident) for _ in range(n + 1)] for n in range(1, cap + 1)}
    degs = {n: [dict(ident) for _ in range(n + 1)] for n in range(0, cap)}
    return FiniteGroupTarget([lvl] * (cap + 1), faces, degs, cap)


@dataclass
class TargetMap:
    """A pointed simplicial map from a simplicial set into a group target."""

    src: FiniteSimplicialSet
    target: object
    tables: list  # per level, dict element id -> target element

    def __call__(self, n, x):
        if x == BASE:
            return self.target.identity(n)
        return self.tables[n][x]

    def is_valid(self):
        K = self.target
        for n in range(self.src.cap + 1):
            if BASE in self.tables[n] and self.tables[n][BASE] != K.identity(n):
                return False
        for n in range(1, self.src.cap + 1):
            for i in range(n + 1):
                for x in self.src.elements[n]:
                    if self(n - 1, self.src.face(n, i, x)) != K.face(n, i, self(n, x)):
                        return False
        for n in range(0, self.src.cap):
            for j in range(n + 1):
                for x in self.src.elements[n]:
                    if self(n + 1, self.src.degeneracy(n, j, x)) != K.degeneracy(n, j, self(n, x)):
                        return False
        return True


def retraction_mbar(K, n, word_in_elements):
    """Left-iterated multiplication of a word of (element, exponent) pairs."""
    acc = K.identity(n)
    for x, e in word_in_elements:
        y = x if e == 1 else K.inv(n, x)
        acc = K.mul(n, acc, y)
    return acc


def evaluate_hom_into_target(f, g, K, n, word):
    """m-bar . F(g) . f on a word of the source free group at level n."""
    image = f.apply(n, word)
    letters = [(g(n, x), e) for x, e in image]
    return retraction_mbar(K, n, letters)


def star(f, g, K):
    """The derived-composition map on generators: A -> K from f: FA -> FB
    and g: B -> K."""
    A = f.src.base
    tables = []
    for n in range(A.cap + 1):
        table = {}
        for a in f.src.generators(n):
            table[a] = evaluate_hom_into_target(f, g, K, n, ((a, 1),))
        tables.append(table)
    out = TargetMap(src=A, target=K, tables=tables)
    if not out.is_valid():
        raise RuntimeError("star evaluation produced a non-simplicial map")
    return out


def check_condition_star(f, g, h, K):
    """f . (g . h) versus (f # g) . h, evaluated exactly on all generators.

    f: FA -> FB and g: FB -> FC homomorphisms, h: C -> K a pointed map.
    Returns (True, None) or (False, (level, generator, lhs, rhs)).
    """
    gh = star(g, h, K)  # B -> K
    lhs = star(f, gh, K)  # A -> K
    fg = g.compose(f)  # FA -> FC
    rhs = star(fg, h, K)
    A = f.src.base
    for n in range(A.cap + 1):
        for a in f.src.generators(n):
            if lhs(n, a) != rhs(n, a):
                return False, (n, a, lhs(n, a), rhs(n, a))
    return True, None


def is_strictly_multiplicative(h, K, L):
    """n . (h x h) = h . m on every pair, levelwise."""
    for n in range(K.cap + 1):
        for a in K.elements(n):
            for b in K.elements(n):
                if h(n, K.mul(n, a, b)) != L.mul(n, h(n, a), h(n, b)):
                    return False, (n, a, b)
    return True, None


@dataclass
class GroupTargetMap:
    """A map between group targets given by element tables (not assumed
    multiplicative until checked)."""

    src_target: object
    dst_target: object
    tables: list

    def __call__(self, n, x):
        return self.tables[n][x]


def check_functoriality(e, f, g, h, K, L):
    """Both naturality identities of the star operation.

    e: FC -> FA, f: FA -> FB homomorphisms; g: B -> K a pointed map;
    h: K -> L a strictly multiplicative map between group targets.
    Raises ValueError with a witness pair if h is not multiplicative.
    """
    ok, witness = is_strictly_multiplicative(h, K, L)
    if not ok:
        raise ValueError(f"map between targets is not strictly multiplicative at {witness}")
    fe = f.compose(e)
    lhs1 = star(fe, g, K)
    fg = star(f, g, K)
    # e^*(f . g): evaluate the homomorphism extension of fg along e
    C = e.src.base
    for n in range(C.cap + 1):
        for c in e.src.generators(n):
            word = e.apply(n, ((c, 1),))
            rhs = retraction_mbar(K, n, [(fg(n, x), ex) for x, ex in word])
            if lhs1(n, c) != rhs:
                return False
    # f . (g^*h) = (f . g)^*h
    gh_tables = []
    B = f.dst.base
    for n in range(B.cap + 1):
        gh_tables.append({x: h(n, g(n, x)) for x in B.elements[n]})
    gh = TargetMap(src=B, target=L, tables=gh_tables)
    lhs2 = star(f, gh, L)
    A = f.src.base
    for n in range(A.cap + 1):
        for a in f.src.generators(n):
            if lhs2(n, a) != h(n, fg(n, a)):
                return False
    return True


def conjugation_hom(F, base_word):
    """Conjugation by the degeneracy tower of a level-0 word; a valid
    self-homomorphism of the free simplicial group."""
    towers = [tuple(base_word)]
    for n in range(F.cap):
        towers.append(F.degeneracy_word(n, 0, towers[-1]))
    tables = []
    for n in range(F.cap + 1):
        w = towers[n]
        tables.append({g: word_mul(word_mul(w, ((g, 1),)), word_inv(w)) for g in F.generators(n)})
    return GroupHomMap(F, F, tables)


def power_hom(F, k):
    """Every generator to its k-th power; commutes with the induced maps
    because faces and degeneracies act letterwise."""
    tables = []
    for n in range(F.cap + 1):
        tables.append({g: tuple([(g, 1)] * k) if k >= 0 else tuple([(g, -1)] * (-k)) for g in F.generators(n)})
    return GroupHomMap(F, F, tables)


def codiscrete_target(elements, mult, inverse, identity, cap):
    """The vertex-power simplicial group of a finite group: level n is the
    (n+1)-fold product, faces delete and degeneracies repeat coordinates."""
    levels = []
    faces = {}
    degs = {}
    for n in range(cap + 1):
        elts = list(itertools.product(elements, repeat=n + 1))
        m = {}
        inv = {}
        for a in elts:
            inv[a] = tuple(inverse[x] for x in a)
            for b in elts:
                m[(a, b)] = tuple(mult[(x, y)] for x, y in zip(a, b))
        levels.append(FiniteGroupLevel(elements=elts, mult=m, inverse=inv, identity=tuple([identity] * (n + 1))))
    for n in range(1, cap + 1):
        faces[n] = [
            {a: a[:i] + a[i + 1 :] for a in levels[n].elements}
            for i in range(n + 1)
        ]
    for n in range(0, cap):
        degs[n] = [
            {a: a[: j + 1] + a[j:] for a in levels[n].elements}
            for j in range(n + 1)
        ]
    return FiniteGroupTarget(levels, faces, degs, cap)
