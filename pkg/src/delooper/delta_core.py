"""Simplicial and restricted (face-only) objects over f.g. abelian groups.

Levels are presented groups, faces and degeneracies are integer matrices,
and every identity is checked as a matrix identity modulo the target
level's relation lattice. Includes the matching object, the surjectivity
reading of Reedy fibrancy, and the free-degeneracy left adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import Hom, PresentedGroup, direct_sum, quotient, subgroup
from .intlin import Mat, SmithSolver, kernel_mod_lattice
from .simplicial import BASE, FiniteSimplicialSet, Report, StructuralError, Violation
from .words import DegeneracyWord, canonical_degeneracy_words


class DeltaSAb:
    """Face-only simplicial object: levels and face matrices up to a cap."""

    def __init__(self, levels, faces, cap):
        self.levels = levels
        self.faces = faces  # faces[n] = [Mat d_0 .. Mat d_n], for 1 <= n <= cap
        self.cap = cap
        self._check_structure()

    def _check_structure(self):
        if len(self.levels) != self.cap + 1:
            raise StructuralError("need a level group for every dimension up to cap")
        for n in range(1, self.cap + 1):
            if len(self.faces.get(n, [])) != n + 1:
                raise StructuralError(f"need {n + 1} face matrices at dimension {n}")
            for i, d in enumerate(self.faces[n]):
                if d.r != self.levels[n - 1].ngens or d.c != self.levels[n].ngens:
                    raise StructuralError(f"face d_{i} at dimension {n} has shape {d.r}x{d.c}")

    def face(self, n, i):
        return self.faces[n][i]

    def rank(self, n):
        return self.levels[n].ngens


class SAb(DeltaSAb):
    """Full simplicial object: faces plus degeneracy matrices."""

    def __init__(self, levels, faces, degeneracies, cap):
        self.degeneracies = degeneracies  # degeneracies[n] = [Mat s_0 .. s_n], 0 <= n < cap
        super().__init__(levels, faces, cap)

    def _check_structure(self):
        super()._check_structure()
        for n in range(0, self.cap):
            if len(self.degeneracies.get(n, [])) != n + 1:
                raise StructuralError(f"need {n + 1} degeneracy matrices at dimension {n}")
            for j, s in enumerate(self.degeneracies[n]):
                if s.r != self.levels[n + 1].ngens or s.c != self.levels[n].ngens:
                    raise StructuralError(f"degeneracy s_{j} at dimension {n} has shape {s.r}x{s.c}")

    def degeneracy(self, n, j):
        return self.degeneracies[n][j]


def underlying_delta(W):
    """Forget the degeneracies."""
    return DeltaSAb(W.levels, W.faces, W.cap)


def _hom_eq(A, B, dst):
    diff = A - B
    solver = dst._snf
    for j in range(diff.c):
        if not solver.contains_column(diff.col(j)):
            return j
    return None


def verify_identities(X):
    """Exhaustive identity check; works on matrix objects and on finite
    simplicial sets alike."""
    if isinstance(X, FiniteSimplicialSet):
        return X.verify_identities()
    report = Report(cap=X.cap)
    add = report.violations.append
    for n in range(2, X.cap + 1):
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                lhs = X.face(n - 1, i) @ X.face(n, j)
                rhs = X.face(n - 1, j - 1) @ X.face(n, i)
                col = _hom_eq(lhs, rhs, X.levels[n - 2])
                if col is not None:
                    add(Violation("dd", n, (i, j), f"d_{i}d_{j} != d_{j - 1}d_{i} on generator {col}"))
    if not isinstance(X, SAb):
        return report
    for n in range(0, X.cap):
        for j in range(n + 1):
            for i in range(n + 2):
                got = X.face(n + 1, i) @ X.degeneracy(n, j)
                if i < j:
                    want = X.degeneracy(n - 1, j - 1) @ X.face(n, i)
                    fam = "ds-low"
                elif i in (j, j + 1):
                    want = Mat.eye(X.rank(n))
                    fam = "ds-id"
                else:
                    want = X.degeneracy(n - 1, j) @ X.face(n, i - 1)
                    fam = "ds-high"
                col = _hom_eq(got, want, X.levels[n])
                if col is not None:
                    add(Violation(fam, n, (i, j), f"d_{i}s_{j} fails on generator {col}"))
    for n in range(0, X.cap - 1):
        for i in range(n + 1):
            for j in range(i, n + 1):
                lhs = X.degeneracy(n + 1, i) @ X.degeneracy(n, j)
                rhs = X.degeneracy(n + 1, j + 1) @ X.degeneracy(n, i)
                col = _hom_eq(lhs, rhs, X.levels[n + 2])
                if col is not None:
                    add(Violation("ss", n, (i, j), f"s_{i}s_{j} != s_{j + 1}s_{i} on generator {col}"))
    return report


def free_abelian(K, reduced=True):
    """Levelwise free abelian group on the non-basepoint simplices of K."""
    index = []
    for n in range(K.cap + 1):
        elts = [x for x in K.elements[n] if not (reduced and x == BASE)]
        index.append({x: i for i, x in enumerate(elts)})
    levels = [PresentedGroup.free(len(index[n])) for n in range(K.cap + 1)]

    def induced(table, n_src, n_dst):
        out = Mat(len(index[n_dst]), len(index[n_src]))
        for x, i in index[n_src].items():
            y = table[x]
            if reduced and y == BASE:
                continue
            out.a[index[n_dst][y]][i] = 1
        return out

    faces = {n: [induced(K.faces[n][i], n, n - 1) for i in range(n + 1)] for n in range(1, K.cap + 1)}
    degs = {n: [induced(K.degeneracies[n][j], n, n + 1) for j in range(n + 1)] for n in range(0, K.cap)}
    return SAb(levels, faces, degs, K.cap)


@dataclass
class MatchingObject:
    """The limit of compatible face tuples at degree n, with its comparison map."""

    n: int
    ambient: PresentedGroup
    group: PresentedGroup
    inclusion: Mat  # group generators as ambient (n+1)-tuple coordinates
    delta: Hom  # V_n -> group
    projections: list  # Mat: group -> V_{n-1}, the i-th tuple component


def matching_object(V, n):
    if not 1 <= n <= V.cap:
        raise ValueError(f"matching object needs 1 <= n <= cap, got {n}")
    low = V.levels[n - 1]
    g = low.ngens
    ambient, offsets = direct_sum([low] * (n + 1))
    if n == 1:
        lattice = Mat.eye(ambient.ngens)
    else:
        lower = V.levels[n - 2]
        pairs = [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)]
        rows = Mat(len(pairs) * lower.ngens, ambient.ngens)
        for p, (i, j) in enumerate(pairs):
            di = V.face(n - 1, i)
            dj1 = V.face(n - 1, j - 1)
            for r in range(lower.ngens):
                for c in range(g):
                    rows.a[p * lower.ngens + r][offsets[j] + c] += di.a[r][c]
                    rows.a[p * lower.ngens + r][offsets[i] + c] -= dj1.a[r][c]
        relblocks = Mat(len(pairs) * lower.ngens, len(pairs) * lower.rels.c)
        for p in range(len(pairs)):
            for r in range(lower.ngens):
                for c in range(lower.rels.c):
                    relblocks.a[p * lower.ngens + r][p * lower.rels.c + c] = lower.rels.a[r][c]
        lattice = kernel_mod_lattice(rows, relblocks)
    group, incl = subgroup(ambient, lattice)
    stacked = Mat(ambient.ngens, V.rank(n))
    for i in range(n + 1):
        d = V.face(n, i)
        for r in range(g):
            for c in range(V.rank(n)):
                stacked.a[offsets[i] + r][c] = d.a[r][c]
    solver = SmithSolver(lattice.hstack(ambient.rels))
    sol = solver.solve_columns(stacked)
    if sol is None:
        raise StructuralError("face tuple map does not land in the matching object")
    delta_mat = Mat(group.ngens, V.rank(n), [row[: V.rank(n)] for row in sol.a[: group.ngens]])
    projections = []
    for i in range(n + 1):
        proj = Mat(g, group.ngens, [incl.mat.a[offsets[i] + r][:] for r in range(g)])
        projections.append(proj)
    return MatchingObject(
        n=n,
        ambient=ambient,
        group=group,
        inclusion=incl.mat,
        delta=Hom(V.levels[n], group, delta_mat),
        projections=projections,
    )


@dataclass
class ReedyReport:
    fibrant: bool
    cap: int
    witnesses: dict = field(default_factory=dict)  # degree -> ambient coset vector

    def describe(self):
        if self.fibrant:
            return f"Reedy fibrant (delta_n surjective for 1 <= n <= {self.cap})"
        degrees = sorted(self.witnesses)
        return "not Reedy fibrant at degrees " + ", ".join(map(str, degrees))


def is_reedy_fibrant(V):
    """Surjectivity of every comparison map delta_n, with cokernel witnesses."""
    witnesses = {}
    for n in range(1, V.cap + 1):
        mo = matching_object(V, n)
        coker, proj = quotient(mo.group, mo.delta.mat)
        if not coker.is_trivial():
            for i in range(mo.group.ngens):
                v = mo.group.basis_vector(i)
                if not coker.is_zero_elt(v):
                    witnesses[n] = mo.inclusion.apply(v)
                    break
    return ReedyReport(fibrant=not witnesses, cap=V.cap, witnesses=witnesses)


def push_face_through(word, i):
    """Rewrite d_i . s_word using the simplicial identities.

    Returns ('deg', word') if the face is absorbed, else
    ('face', i', word') meaning s_word' . d_i'.
    """
    letters = list(word.letters)
    outer = []
    while letters:
        j = letters.pop()
        if i < j:
            outer.append(j - 1)
        elif i in (j, j + 1):
            remaining = tuple(letters + outer[::-1])
            return ("deg", DegeneracyWord(word.source_dim, remaining).normal_form())
        else:
            outer.append(j)
            i -= 1
    return ("face", i, DegeneracyWord(word.source_dim - 1, tuple(outer[::-1])).normal_form())


@dataclass
class Extension:
    """Result of the free-degeneracy left adjoint applied to a face-only object."""

    object: SAb
    iota: list  # per level, Mat: V_n -> Y_n (split inclusion)
    retraction: list  # per level, Mat: Y_n -> V_n with retraction . iota = id
    summands: list  # per level, list of (word or None, source level, offset)


def _extension_layout(V):
    layout = []
    for n in range(V.cap + 1):
        entries = [(None, n, 0)]
        offset = V.rank(n)
        words = sorted(
            (w for k in range(n) for w in canonical_degeneracy_words(k, n)),
            key=lambda w: (len(w.letters), w.letters),
        )
        for w in words:
            entries.append((w, w.source_dim, offset))
            offset += V.rank(w.source_dim)
        layout.append((entries, offset))
    return layout


def free_degeneracy_extension(V):
    """Y_n = V_n (+) D_n with D_n the sum of V_k over canonical degeneracy
    words k -> n; degeneracies are summand bookkeeping, faces are induced."""
    layout = _extension_layout(V)
    levels = []
    for n in range(V.cap + 1):
        entries, total = layout[n]
        groups = [V.levels[k] for (_, k, _) in entries]
        glued, _ = direct_sum(groups)
        levels.append(glued)
    word_offset = [
        {(w.letters if w is not None else None): off for (w, _, off) in layout[n][0]}
        for n in range(V.cap + 1)
    ]

    def block_write(target, roff, coff, block):
        for r in range(block.r):
            row = target.a[roff + r]
            brow = block.a[r]
            for c in range(block.c):
                if brow[c]:
                    row[coff + c] = brow[c]

    faces = {}
    for n in range(1, V.cap + 1):
        faces[n] = []
        for i in range(n + 1):
            out = Mat(layout[n - 1][1], layout[n][1])
            for (w, k, off) in layout[n][0]:
                if w is None:
                    block_write(out, word_offset[n - 1][None], off, V.face(n, i))
                    continue
                result = push_face_through(w, i)
                if result[0] == "deg":
                    w2 = result[1]
                    block_write(out, word_offset[n - 1][w2.letters or None], off, Mat.eye(V.rank(k)))
                else:
                    _, i2, w2 = result
                    block_write(
                        out,
                        word_offset[n - 1][w2.letters or None],
                        off,
                        V.face(k, i2),
                    )
            faces[n].append(out)
    degs = {}
    for n in range(0, V.cap):
        degs[n] = []
        for j in range(n + 1):
            out = Mat(layout[n + 1][1], layout[n][1])
            for (w, k, off) in layout[n][0]:
                if w is None:
                    w2 = DegeneracyWord(n, (j,))
                else:
                    w2 = w.prefixed_by(j)
                block_write(out, word_offset[n + 1][w2.letters], off, Mat.eye(V.rank(k)))
            degs[n].append(out)
    iota = []
    retraction = []
    for n in range(V.cap + 1):
        total = layout[n][1]
        inc = Mat(total, V.rank(n))
        ret = Mat(V.rank(n), total)
        for r in range(V.rank(n)):
            inc.a[r][r] = 1
            ret.a[r][r] = 1
        iota.append(inc)
        retraction.append(ret)
    Y = SAb(levels, faces, degs, V.cap)
    return Extension(object=Y, iota=iota, retraction=retraction, summands=[layout[n][0] for n in range(V.cap + 1)])


def extension_counit(ext, W):
    """For V = U(W): the counit Y -> W, evaluating each word by W's degeneracies."""
    mats = []
    for n in range(W.cap + 1):
        total = sum(W.rank(k) for (_, k, _) in ext.summands[n])
        out = Mat(W.rank(n), total)
        for (w, k, off) in ext.summands[n]:
            if w is None:
                block = Mat.eye(W.rank(n))
            else:
                block = Mat.eye(W.rank(k))
                dim = k
                for j in w.letters:
                    block = W.degeneracy(dim, j) @ block
                    dim += 1
            for r in range(block.r):
                for c in range(block.c):
                    out.a[r][off + c] = block.a[r][c]
        mats.append(out)
    return mats


def degenerate_subobject(W, n):
    """Image subgroup L_n generated by all degeneracies into level n."""
    if n < 1 or n > W.cap:
        raise ValueError("degenerate subobject needs 1 <= n <= cap")
    gens = None
    for j in range(n):
        s = W.degeneracy(n - 1, j)
        gens = s if gens is None else gens.hstack(s)
    L, incl = subgroup(W.levels[n], gens)
    return L, incl
