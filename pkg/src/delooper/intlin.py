"""Exact integer matrices and lattice computations.

Everything downstream (group presentations, Moore complexes, lifting
systems) reduces to Smith normal form over the integers, so this module
keeps matrices as plain lists of Python ints: no overflow, no floats.
Shapes are carried explicitly so zero-dimensional edges stay well typed.
"""

from __future__ import annotations


class Mat:
    """An r-by-c integer matrix; rows are lists."""

    __slots__ = ("r", "c", "a")

    def __init__(self, r, c, a=None):
        self.r = r
        self.c = c
        if a is None:
            self.a = [[0] * c for _ in range(r)]
        else:
            self.a = a

    @staticmethod
    def from_rows(rows, c=None):
        r = len(rows)
        if r == 0:
            if c is None:
                raise ValueError("column count required for empty matrix")
            return Mat(0, c, [])
        return Mat(r, len(rows[0]), [list(x) for x in rows])

    @staticmethod
    def eye(n):
        return Mat(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(r, c):
        return Mat(r, c)

    @staticmethod
    def column(v):
        return Mat(len(v), 1, [[x] for x in v])

    def col(self, j):
        return [self.a[i][j] for i in range(self.r)]

    def cols(self):
        return [self.col(j) for j in range(self.c)]

    def copy(self):
        return Mat(self.r, self.c, [row[:] for row in self.a])

    def transpose(self):
        return Mat(self.c, self.r, [[self.a[i][j] for i in range(self.r)] for j in range(self.c)])

    def hstack(self, other):
        if self.r != other.r:
            raise ValueError(f"hstack shape mismatch {self.r} vs {other.r}")
        return Mat(self.r, self.c + other.c, [ra + rb for ra, rb in zip(self.a, other.a)])

    def vstack(self, other):
        if self.c != other.c:
            raise ValueError(f"vstack shape mismatch {self.c} vs {other.c}")
        return Mat(self.r + other.r, self.c, [row[:] for row in self.a] + [row[:] for row in other.a])

    def submatrix(self, rows, cols):
        return Mat(len(rows), len(cols), [[self.a[i][j] for j in cols] for i in rows])

    def __matmul__(self, other):
        if self.c != other.r:
            raise ValueError(f"matmul shape mismatch {self.r}x{self.c} @ {other.r}x{other.c}")
        out = Mat(self.r, other.c)
        A, B, C = self.a, other.a, out.a
        for i in range(self.r):
            Ai, Ci = A[i], C[i]
            for t in range(self.c):
                v = Ai[t]
                if v:
                    Bt = B[t]
                    for j in range(other.c):
                        Ci[j] += v * Bt[j]
        return out

    def apply(self, v):
        """Matrix times a plain integer vector."""
        if self.c != len(v):
            raise ValueError("apply shape mismatch")
        return [sum(row[j] * v[j] for j in range(self.c)) for row in self.a]

    def __add__(self, other):
        self._same_shape(other)
        return Mat(self.r, self.c, [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(self.a, other.a)])

    def __sub__(self, other):
        self._same_shape(other)
        return Mat(self.r, self.c, [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(self.a, other.a)])

    def __neg__(self):
        return Mat(self.r, self.c, [[-x for x in row] for row in self.a])

    def scale(self, k):
        return Mat(self.r, self.c, [[k * x for x in row] for row in self.a])

    def __eq__(self, other):
        return isinstance(other, Mat) and self.r == other.r and self.c == other.c and self.a == other.a

    def __hash__(self):
        return hash((self.r, self.c, tuple(tuple(row) for row in self.a)))

    def is_zero(self):
        return all(x == 0 for row in self.a for x in row)

    def _same_shape(self, other):
        if self.r != other.r or self.c != other.c:
            raise ValueError(f"shape mismatch {self.r}x{self.c} vs {other.r}x{other.c}")

    def __repr__(self):
        return f"Mat({self.r}x{self.c}, {self.a!r})"


def smith_normal_form(A):
    """Return (D, U, V) with D = U @ A @ V in Smith normal form.

    U, V unimodular; diagonal entries nonnegative with d1 | d2 | ...
    Smallest-pivot selection keeps intermediate entries modest.
    """
    m, n = A.r, A.c
    D = [row[:] for row in A.a]
    U = Mat.eye(m).a
    V = Mat.eye(n).a
    t = 0
    while t < min(m, n):
        piv, best = None, None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                v = Di[j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            D[t], D[pi] = D[pi], D[t]
            U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for r in D:
                r[t], r[pj] = r[pj], r[t]
            for r in V:
                r[t], r[pj] = r[pj], r[t]
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    if q:
                        D[i] = [x - q * y for x, y in zip(D[i], D[t])]
                        U[i] = [x - q * y for x, y in zip(U[i], U[t])]
                    if D[i][t]:
                        D[t], D[i] = D[i], D[t]
                        U[t], U[i] = U[i], U[t]
                        changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    if q:
                        for r in D:
                            r[j] -= q * r[t]
                        for r in V:
                            r[j] -= q * r[t]
                    if D[t][j]:
                        for r in D:
                            r[t], r[j] = r[j], r[t]
                        for r in V:
                            r[t], r[j] = r[j], r[t]
                        changed = True
            if not changed:
                break
        d = D[t][t]
        bad = None
        for i in range(t + 1, m):
            Di = D[i]
            for j in range(t + 1, n):
                if Di[j] % d:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            D[t] = [x + y for x, y in zip(D[t], D[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
            continue
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return Mat(m, n, D), Mat(m, m, U), Mat(n, n, V)


class SmithSolver:
    """Caches the SNF of A to answer many A x = b queries."""

    def __init__(self, A):
        self.A = A
        self.D, self.U, self.V = smith_normal_form(A)
        r = 0
        while r < min(A.r, A.c) and self.D.a[r][r] != 0:
            r += 1
        self.rank = r

    def solve_columns(self, B):
        """Particular solution X with A @ X = B, or None. Free coords set to 0."""
        if self.A.r != B.r:
            raise ValueError("solve shape mismatch")
        UB = self.U @ B
        X = Mat(self.A.c, B.c)
        for c in range(B.c):
            y = [0] * self.A.c
            for i in range(self.rank):
                d = self.D.a[i][i]
                if UB.a[i][c] % d:
                    return None
                y[i] = UB.a[i][c] // d
            for i in range(self.rank, self.A.r):
                if UB.a[i][c]:
                    return None
            for i in range(self.A.c):
                X.a[i][c] = sum(self.V.a[i][j] * y[j] for j in range(self.rank))
        return X

    def nullspace(self):
        """Basis (columns) of the integer kernel of A."""
        return Mat(
            self.A.c,
            self.A.c - self.rank,
            [[self.V.a[i][j] for j in range(self.rank, self.A.c)] for i in range(self.A.c)],
        )

    def contains_column(self, b):
        return self.solve_columns(Mat.column(b)) is not None


def solve(A, B):
    """One-shot A X = B; returns particular solution or None."""
    return SmithSolver(A).solve_columns(B)


def nullspace(A):
    return SmithSolver(A).nullspace()


def kernel_mod_lattice(A, L):
    """Basis of the lattice {x : A x lies in the column lattice of L}.

    A: m x n, L: m x k. Computed from the kernel of [A | L] projected to
    the x-coordinates, then column-reduced to a basis.
    """
    if L.c == 0:
        return nullspace(A)
    stacked = A.hstack(L)
    N = nullspace(stacked)
    proj = Mat(A.c, N.c, [row[:] for row in N.a[: A.c]])
    return column_basis(proj)


def column_basis(A):
    """A basis (as columns) for the lattice spanned by the columns of A.

    From D = U A V: the column lattice of A equals that of U^{-1} D, whose
    nonzero columns d_i * Uinv[:,i] are independent. Deterministic.
    """
    D, U, V = smith_normal_form(A)
    r = 0
    while r < min(A.r, A.c) and D.a[r][r] != 0:
        r += 1
    if r == 0:
        return Mat(A.r, 0, [[] for _ in range(A.r)])
    Uinv = SmithSolver(U).solve_columns(Mat.eye(A.r))
    return Mat(A.r, r, [[D.a[j][j] * Uinv.a[i][j] for j in range(r)] for i in range(A.r)])


def lattice_contains(L, b):
    """Is the vector b in the column lattice of L?"""
    return solve(L, Mat.column(b)) is not None
