"""Finite pointed simplicial sets with explicit face/degeneracy tables.

Elements are string ids per dimension up to a cap; the basepoint and all
its degeneracies are named "*" in every dimension. Identity checking is
exhaustive over elements, which is the point of keeping things finite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


BASE = "*"


@dataclass
class Violation:
    family: str
    degree: int
    indices: tuple
    witness: str

    def describe(self):
        return f"{self.family} at degree {self.degree}, indices {self.indices}, witness {self.witness}"


@dataclass
class Report:
    cap: int
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def describe(self):
        if self.ok:
            return f"all simplicial identities hold up to cap {self.cap}"
        lines = [v.describe() for v in self.violations]
        return f"{len(lines)} violation(s) up to cap {self.cap}:\n" + "\n".join(lines)


class StructuralError(ValueError):
    """Malformed data (missing tables, wrong index ranges), as opposed to
    a well-formed object that fails the simplicial identities."""


class FiniteSimplicialSet:
    def __init__(self, cap, elements, faces, degeneracies):
        """elements[n]: list of ids; faces[n][i]: dict id->id (1 <= n <= cap);
        degeneracies[n][j]: dict id->id (0 <= n < cap)."""
        self.cap = cap
        self.elements = elements
        self.faces = faces
        self.degeneracies = degeneracies
        self._check_structure()

    def _check_structure(self):
        if len(self.elements) != self.cap + 1:
            raise StructuralError("need element list for every dimension up to cap")
        for n, elts in enumerate(self.elements):
            if BASE not in elts:
                raise StructuralError(f"basepoint missing in dimension {n}")
            if len(set(elts)) != len(elts):
                raise StructuralError(f"duplicate ids in dimension {n}")
        for n in range(1, self.cap + 1):
            if len(self.faces.get(n, [])) != n + 1:
                raise StructuralError(f"need {n + 1} face maps at dimension {n}")
            for i, table in enumerate(self.faces[n]):
                for x in self.elements[n]:
                    if x not in table:
                        raise StructuralError(f"d_{i} undefined on {x} at dimension {n}")
                    if table[x] not in set(self.elements[n - 1]):
                        raise StructuralError(f"d_{i}({x}) not an element of dimension {n - 1}")
        for n in range(0, self.cap):
            if len(self.degeneracies.get(n, [])) != n + 1:
                raise StructuralError(f"need {n + 1} degeneracy maps at dimension {n}")
            for j, table in enumerate(self.degeneracies[n]):
                for x in self.elements[n]:
                    if x not in table:
                        raise StructuralError(f"s_{j} undefined on {x} at dimension {n}")
                    if table[x] not in set(self.elements[n + 1]):
                        raise StructuralError(f"s_{j}({x}) not an element of dimension {n + 1}")

    def face(self, n, i, x):
        return self.faces[n][i][x]

    def degeneracy(self, n, j, x):
        return self.degeneracies[n][j][x]

    def nondegenerate(self, n):
        if n == 0:
            return [x for x in self.elements[0]]
        degenerate = set()
        for j in range(n):
            for x in self.elements[n - 1]:
                degenerate.add(self.degeneracies[n - 1][j][x])
        return [x for x in self.elements[n] if x not in degenerate]

    def verify_identities(self):
        """Exhaustive check of the five identity families and pointedness."""
        report = Report(cap=self.cap)
        add = report.violations.append
        for n in range(1, self.cap + 1):
            for i in range(n + 1):
                if self.face(n, i, BASE) != BASE:
                    add(Violation("basepoint", n, (i,), f"d_{i}(*) = {self.face(n, i, BASE)}"))
        for n in range(0, self.cap):
            for j in range(n + 1):
                if self.degeneracy(n, j, BASE) != BASE:
                    add(Violation("basepoint", n, (j,), f"s_{j}(*) = {self.degeneracy(n, j, BASE)}"))
        for n in range(2, self.cap + 1):
            for i in range(n + 1):
                for j in range(i + 1, n + 1):
                    for x in self.elements[n]:
                        lhs = self.face(n - 1, i, self.face(n, j, x))
                        rhs = self.face(n - 1, j - 1, self.face(n, i, x))
                        if lhs != rhs:
                            add(Violation("dd", n, (i, j), f"d_{i}d_{j}({x}) = {lhs} != {rhs} = d_{j - 1}d_{i}({x})"))
        for n in range(0, self.cap):
            for j in range(n + 1):
                for i in range(n + 2):
                    for x in self.elements[n]:
                        got = self.face(n + 1, i, self.degeneracy(n, j, x))
                        if i < j:
                            want = self.degeneracy(n - 1, j - 1, self.face(n, i, x)) if n >= 1 else None
                            fam = "ds-low"
                        elif i in (j, j + 1):
                            want = x
                            fam = "ds-id"
                        else:
                            want = self.degeneracy(n - 1, j, self.face(n, i - 1, x)) if n >= 1 else None
                            fam = "ds-high"
                        if want is not None and got != want:
                            add(Violation(fam, n, (i, j), f"d_{i}s_{j}({x}) = {got} != {want}"))
        for n in range(0, self.cap - 1):
            for i in range(n + 1):
                for j in range(i, n + 1):
                    for x in self.elements[n]:
                        lhs = self.degeneracy(n + 1, i, self.degeneracy(n, j, x))
                        rhs = self.degeneracy(n + 1, j + 1, self.degeneracy(n, i, x))
                        if lhs != rhs:
                            add(Violation("ss", n, (i, j), f"s_{i}s_{j}({x}) = {lhs} != {rhs}"))
        return report


def _tuple_id(t):
    return "x" + "".join(str(v) for v in t)


def standard_simplex(n, cap, basepoint="vertex0"):
    """Pointed model of Delta[n].

    basepoint="vertex0" identifies vertex 0 (and its degeneracies) with the
    basepoint; "disjoint" adds a free basepoint alongside all simplices.
    """
    collapse_vertex = basepoint == "vertex0"

    def name(t):
        if collapse_vertex and set(t) == {0}:
            return BASE
        return _tuple_id(t)

    elements = []
    by_dim = []
    for k in range(cap + 1):
        tups = [t for t in itertools.combinations_with_replacement(range(n + 1), k + 1)]
        by_dim.append(tups)
        named = [name(t) for t in tups]
        elements.append(([BASE] if not collapse_vertex else []) + sorted(set(named), key=named.index))
        if collapse_vertex and BASE not in elements[-1]:
            elements[-1].insert(0, BASE)
    faces = {}
    degeneracies = {}
    for k in range(1, cap + 1):
        faces[k] = []
        for i in range(k + 1):
            table = {BASE: BASE}
            for t in by_dim[k]:
                table[name(t)] = name(t[:i] + t[i + 1 :])
            faces[k].append(table)
    for k in range(0, cap):
        degeneracies[k] = []
        for j in range(k + 1):
            table = {BASE: BASE}
            for t in by_dim[k]:
                table[name(t)] = name(t[: j + 1] + t[j:])
            degeneracies[k].append(table)
    return FiniteSimplicialSet(cap, elements, faces, degeneracies)


def sphere(n, cap):
    """S^n = Delta[n]/boundary: the basepoint plus the degeneracies of the top cell."""
    if cap < n:
        raise ValueError("cap must be at least n")
    elements = []
    by_dim = []
    for k in range(cap + 1):
        tups = [
            t
            for t in itertools.combinations_with_replacement(range(n + 1), k + 1)
            if set(t) == set(range(n + 1))
        ]
        by_dim.append(tups)
        elements.append([BASE] + [_tuple_id(t) for t in tups])
    faces = {}
    degeneracies = {}
    for k in range(1, cap + 1):
        faces[k] = []
        for i in range(k + 1):
            table = {BASE: BASE}
            for t in by_dim[k]:
                ft = t[:i] + t[i + 1 :]
                table[_tuple_id(t)] = _tuple_id(ft) if set(ft) == set(range(n + 1)) else BASE
            faces[k].append(table)
    for k in range(0, cap):
        degeneracies[k] = []
        for j in range(k + 1):
            table = {BASE: BASE}
            for t in by_dim[k]:
                table[_tuple_id(t)] = _tuple_id(t[: j + 1] + t[j:])
            degeneracies[k].append(table)
    return FiniteSimplicialSet(cap, elements, faces, degeneracies)


def zero_sphere(cap):
    """S^0: the basepoint and one other point, with all its degeneracies."""
    elements = [[BASE, "p"] for _ in range(cap + 1)]
    faces = {n: [{BASE: BASE, "p": "p"} for _ in range(n + 1)] for n in range(1, cap + 1)}
    degeneracies = {n: [{BASE: BASE, "p": "p"} for _ in range(n + 1)] for n in range(0, cap)}
    return FiniteSimplicialSet(cap, elements, faces, degeneracies)


def point(cap):
    elements = [[BASE] for _ in range(cap + 1)]
    faces = {n: [{BASE: BASE} for _ in range(n + 1)] for n in range(1, cap + 1)}
    degeneracies = {n: [{BASE: BASE} for _ in range(n + 1)] for n in range(0, cap)}
    return FiniteSimplicialSet(cap, elements, faces, degeneracies)


@dataclass
class SimplicialSetMap:
    src: FiniteSimplicialSet
    dst: FiniteSimplicialSet
    tables: list  # per dimension, dict id -> id

    def __call__(self, n, x):
        return self.tables[n][x]

    def is_valid(self):
        if self.src.cap != self.dst.cap:
            return False
        for n in range(self.src.cap + 1):
            if self.tables[n].get(BASE) != BASE:
                return False
            for x in self.src.elements[n]:
                if self.tables[n].get(x) not in set(self.dst.elements[n]):
                    return False
        for n in range(1, self.src.cap + 1):
            for i in range(n + 1):
                for x in self.src.elements[n]:
                    if self.tables[n - 1][self.src.face(n, i, x)] != self.dst.faces[n][i][self.tables[n][x]]:
                        return False
        for n in range(0, self.src.cap):
            for j in range(n + 1):
                for x in self.src.elements[n]:
                    if self.tables[n + 1][self.src.degeneracy(n, j, x)] != self.dst.degeneracies[n][j][self.tables[n][x]]:
                        return False
        return True


def identity_map(K):
    return SimplicialSetMap(K, K, [{x: x for x in K.elements[n]} for n in range(K.cap + 1)])


def enumerate_pointed_maps(A, B):
    """All simplicial pointed maps A -> B, by backtracking on nondegenerate cells."""
    if A.cap != B.cap:
        raise ValueError("maps require equal caps")
    cap = A.cap
    nondeg = {n: [x for x in A.nondegenerate(n) if x != BASE] for n in range(cap + 1)}

    def extend_table(partial, n):
        """Fill dimension n images of degenerate cells from dimension n-1."""
        table = dict(partial[n])
        for j in range(n):
            for x in A.elements[n - 1]:
                sx = A.degeneracy(n - 1, j, x)
                img = B.degeneracies[n - 1][j][partial[n - 1][x]]
                if sx in table and table[sx] != img:
                    return None
                table[sx] = img
        return table

    results = []

    def assign(n, partial):
        if n > cap:
            m = SimplicialSetMap(A, B, [dict(partial[k]) for k in range(cap + 1)])
            if m.is_valid():
                results.append(m)
            return
        base_table = {BASE: BASE}
        if n > 0:
            partial.append(base_table)
            filled = extend_table(partial, n)
            partial.pop()
            if filled is None:
                return
            base_table = filled
        cells = nondeg[n]

        def candidates(x):
            opts = []
            for y in B.elements[n]:
                ok = True
                if n > 0:
                    for i in range(n + 1):
                        if partial[n - 1][A.face(n, i, x)] != B.faces[n][i][y]:
                            ok = False
                            break
                if ok:
                    opts.append(y)
            return opts

        def rec(idx, table):
            if idx == len(cells):
                partial.append(table)
                assign(n + 1, partial)
                partial.pop()
                return
            x = cells[idx]
            for y in candidates(x):
                table2 = dict(table)
                table2[x] = y
                rec(idx + 1, table2)

        rec(0, base_table)

    assign(0, [])
    return results
