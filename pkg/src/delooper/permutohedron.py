"""Permutohedra as ordered partitions, labeled by face-map factorizations.

Faces of P_k are ordered partitions of {1..k+1}; vertices are the
(k+1)! orderings. For an iterated face map delta of length k+1 the
vertices carry its factorizations (removal orders of the deleted
vertices) and every face carries the block word decomposition. The
higher-operation bookkeeping (proper factors, compatible-collection
constraint schemas, boundary assembly) is emitted as data, never
evaluated in any track group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .words import FaceWord


class ResourceError(ValueError):
    """Request beyond the practical enumeration bound."""


PRACTICAL_K = 7


def ordered_partitions(elements):
    """All ordered partitions of a set, as tuples of sorted tuples."""
    out = []

    def build(remaining, prefix):
        if not remaining:
            out.append(tuple(prefix))
            return
        rem = tuple(sorted(remaining))
        for r in range(1, len(rem) + 1):
            for block in itertools.combinations(rem, r):
                build(set(rem) - set(block), prefix + [tuple(block)])

    build(set(elements), [])
    return out


@dataclass(frozen=True)
class PermutohedronFace:
    partition: tuple  # ordered partition, blocks are sorted tuples

    @property
    def k(self):
        return sum(len(b) for b in self.partition) - 1

    @property
    def dimension(self):
        return self.k + 1 - len(self.partition)

    def refines(self, other):
        """True if this face is contained in other (partition refinement)."""
        mine = list(self.partition)
        pos = 0
        for block in other.partition:
            acc = []
            while pos < len(mine) and len(acc) < len(block):
                acc.extend(mine[pos])
                pos += 1
            if sorted(acc) != list(block):
                return False
        return pos == len(mine)


@dataclass
class FaceLattice:
    k: int
    faces: list  # all PermutohedronFace, every dimension

    def by_dimension(self):
        out = {}
        for f in self.faces:
            out.setdefault(f.dimension, []).append(f)
        return out

    def vertices(self):
        return [f for f in self.faces if f.dimension == 0]

    def boundary_euler_characteristic(self):
        counts = self.by_dimension()
        return sum((-1) ** d * len(counts.get(d, [])) for d in range(self.k))


def build_permutohedron(k):
    """Full face lattice of P_k; boundary Euler characteristic is checked."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > PRACTICAL_K:
        raise ResourceError(f"P_{k} enumeration beyond practical bound {PRACTICAL_K}")
    faces = [PermutohedronFace(p) for p in ordered_partitions(range(1, k + 2))]
    lattice = FaceLattice(k=k, faces=faces)
    expected = 1 + (-1) ** (k - 1) if k >= 1 else 0
    got = lattice.boundary_euler_characteristic()
    if k >= 1 and got != expected:
        raise RuntimeError(f"boundary Euler characteristic {got} differs from sphere value {expected}")
    return lattice


def factorizations(delta):
    """All ways of writing delta as a composite of single face maps."""
    return delta.factorizations()


def _block_words(delta, partition):
    """The block decomposition of delta along an ordered partition.

    Block t removes the t-th batch of deleted vertices; batches are indexed
    through the ascending enumeration m_1 < m_2 < ... of delta's deleted set.
    """
    deleted = sorted(delta.deleted_vertices())
    alive = list(range(delta.source_dim + 1))
    words = []
    dim = delta.source_dim
    for block in partition:
        batch = sorted(deleted[b - 1] for b in block)
        letters = []
        for v in batch:
            letters.append(alive.index(v))
            alive.remove(v)
        words.append(FaceWord(dim, tuple(letters)))
        dim -= len(batch)
    return tuple(words)


@dataclass
class LabeledPermutohedron:
    delta: FaceWord
    lattice: FaceLattice
    vertex_labels: dict  # PermutohedronFace (dim 0) -> FaceWord factorization
    face_labels: dict  # PermutohedronFace -> tuple of block FaceWords


def label(delta):
    """P_k(delta): vertices carry factorizations, faces carry block words."""
    delta = delta.normal_form()
    k = len(delta) - 1
    if k < 1:
        raise ValueError("labeling needs a word of length at least 2")
    lattice = build_permutohedron(k)
    vertex_labels = {}
    face_labels = {}
    for face in lattice.faces:
        words = _block_words(delta, face.partition)
        face_labels[face] = words
        if face.dimension == 0:
            flat = []
            for w in words:
                flat.extend(w.letters)
            vertex_labels[face] = FaceWord(delta.source_dim, tuple(flat))
    facts = {w.letters for w in delta.factorizations()}
    labeled = {w.letters for w in vertex_labels.values()}
    if labeled != facts:
        raise RuntimeError("vertex labels do not biject with factorizations")
    return LabeledPermutohedron(delta=delta, lattice=lattice, vertex_labels=vertex_labels, face_labels=face_labels)


@dataclass
class ProperFactorCollection:
    delta: FaceWord
    factors: frozenset  # normal-form FaceWords


def proper_factors(delta):
    """C(delta): words gamma with gamma' . gamma . gamma'' = delta, the outer
    words not both identities; deduplicated by normal form."""
    delta = delta.normal_form()
    if len(delta) < 2:
        return ProperFactorCollection(delta=delta, factors=frozenset())
    deleted = sorted(delta.deleted_vertices())
    total = len(deleted)
    found = set()
    for pre_mask in range(1 << total):
        pre = [deleted[i] for i in range(total) if pre_mask >> i & 1]
        rest = [deleted[i] for i in range(total) if not pre_mask >> i & 1]
        if not rest:
            continue
        for mid_size in range(1, len(rest) + 1):
            for mid in itertools.combinations(rest, mid_size):
                if not pre and len(mid) == total:
                    continue  # delta itself with identity outer words
                alive = [v for v in range(delta.source_dim + 1) if v not in pre]
                letters = []
                for v in sorted(mid):
                    letters.append(alive.index(v))
                    alive.remove(v)
                word = FaceWord(delta.source_dim - len(pre), tuple(letters)).normal_form()
                found.add(word)
    return ProperFactorCollection(delta=delta, factors=frozenset(found))


@dataclass(frozen=True)
class SlotSpec:
    word: FaceWord

    @property
    def source_level(self):
        return self.word.source_dim

    @property
    def target_level(self):
        return self.word.target_dim

    @property
    def polytope_dimension(self):
        return len(self.word) - 1


@dataclass
class FaceEquation:
    partition: tuple  # ordered partition of the letter batch indices
    blocks: tuple  # FaceWords, one per partition block
    factor_dims: tuple  # polytope dimension of each factor

    def describe(self):
        prods = " x ".join(f"P_{d}({w.describe()})" for d, w in zip(self.factor_dims, self.blocks))
        return f"restriction to {self.partition} equals composite over {prods}"


@dataclass
class CompatibleCollectionSchema:
    delta: FaceWord
    slots: dict  # FaceWord -> SlotSpec
    unit_constraints: list  # (FaceWord, pinned face index, level)
    equations: list  # FaceEquation per positive-codimension non-vertex face
    assembly: list  # facets: (partition, blocks) covering the boundary sphere
    splitting_note: str

    def constraint_count(self):
        return len(self.equations)


def compatible_schema(delta):
    """Constraint system over the proper-factor slots of delta.

    One equation per face of P_k(delta) of positive codimension that is not
    a vertex; unit constraints pin the single-letter slots to their face
    maps; the facet list is the boundary assembly of the induced map.
    """
    delta = delta.normal_form()
    k = len(delta) - 1
    if k < 1:
        raise ValueError("no higher operation for a word of length < 2")
    collection = proper_factors(delta)
    slots = {w: SlotSpec(w) for w in collection.factors}
    unit_constraints = []
    for w in collection.factors:
        if len(w) == 1:
            unit_constraints.append((w, w.letters[0], w.source_dim))
    equations = []
    assembly = []
    for partition in ordered_partitions(range(1, k + 2)):
        r = len(partition)
        if r == 1:
            continue  # the whole polytope: no slot for delta itself
        blocks = _block_words(delta, partition)
        for b in blocks:
            if b.normal_form() not in slots:
                raise RuntimeError("block word escapes the proper-factor collection")
        if r == 2:
            assembly.append((partition, blocks))
        if r <= k:  # vertices (r = k+1) are forced composites of pinned units
            equations.append(
                FaceEquation(
                    partition=partition,
                    blocks=blocks,
                    factor_dims=tuple(len(b) - 1 for b in blocks),
                )
            )
    note = (
        "boundary sphere of P_k splits the half-smash as wedge of the smash "
        "and the base; the operation class is the image of the assembled "
        "boundary map under the projection to the smash factor"
    )
    return CompatibleCollectionSchema(
        delta=delta,
        slots=slots,
        unit_constraints=unit_constraints,
        equations=equations,
        assembly=assembly,
        splitting_note=note,
    )


@dataclass
class SimplexFaceIndex:
    n: int
    faces: dict  # FaceWord -> vertex tuple of the face
    inclusions: dict  # (subface word, face word) -> relative FaceWord

    def faces_of_dimension(self, k):
        return [w for w, verts in self.faces.items() if len(verts) - 1 == k]

    def boundary_words(self):
        return [w for w, verts in self.faces.items() if len(verts) - 1 <= self.n - 1]


def simplex_face_index(n):
    """Non-degenerate faces of the n-simplex indexed by face words.

    A k-face is the vertex subset it spans; its index word deletes the
    complement. Inclusion words between incident faces are recorded
    relative to the larger face's own indexing.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    faces = {}
    by_set = {}
    for size in range(1, n + 2):
        for verts in itertools.combinations(range(n + 1), size):
            word = FaceWord.from_deleted(n, tuple(v for v in range(n + 1) if v not in verts))
            faces[word] = verts
            by_set[verts] = word
    inclusions = {}
    for verts, word in by_set.items():
        for subsize in range(1, len(verts)):
            for sub in itertools.combinations(verts, subsize):
                subword = by_set[sub]
                # express the inclusion inside the larger face's standard simplex
                rel_deleted = tuple(sorted(verts.index(v) for v in verts if v not in sub))
                inclusions[(subword, word)] = FaceWord.from_deleted(len(verts) - 1, rel_deleted)
    return SimplexFaceIndex(n=n, faces=faces, inclusions=inclusions)


@dataclass
class GluingEquation:
    level: int  # j: the equation links h_j and h_{j+1}
    subface: FaceWord
    parent: FaceWord
    connecting_letter: int
    inclusion: FaceWord

    def describe(self):
        return (
            f"h_{self.level} . (id x d_{self.connecting_letter}) = "
            f"h_{self.level + 1} . (iota[{self.subface.describe()} -> {self.parent.describe()}] x id)"
        )


@dataclass
class CompatibleSequenceSchema:
    n: int
    slots: list  # levels 0..n-1
    equations: list
    assembly: list  # (facet index i, description) for the boundary map

    def describe(self):
        lines = [f"slots h_0 .. h_{self.n - 1}"]
        lines += [eq.describe() for eq in self.equations]
        lines += [f"hbar on facet d_{i}: h_{self.n - 1} . (id x d_{i})" for i, _ in self.assembly]
        return "\n".join(lines)


def compatible_sequence_schema(n):
    """Gluing equations for boundary-compatible sequences over the n-simplex.

    One equation per face of dimension at most n-2, linking its slot to the
    parent face obtained by undoing the last-applied letter of its index
    word; the assembly recipe restricts the top slot along each facet.
    """
    if n < 2:
        raise ValueError("compatible sequences start at n = 2")
    idx = simplex_face_index(n)
    equations = []
    for word, verts in idx.faces.items():
        dim = len(verts) - 1
        if dim > n - 2:
            continue
        parent_word = FaceWord(n, word.letters[:-1])
        parent_norm = parent_word.normal_form()
        connecting = word.letters[-1]
        parent_verts = idx.faces[parent_norm]
        inclusion = idx.inclusions[(word, parent_norm)]
        equations.append(
            GluingEquation(
                level=dim,
                subface=word,
                parent=parent_norm,
                connecting_letter=connecting,
                inclusion=inclusion,
            )
        )
    assembly = [(i, f"facet opposite vertex {i}") for i in range(n + 1)]
    return CompatibleSequenceSchema(
        n=n,
        slots=list(range(n)),
        equations=equations,
        assembly=assembly,
    )
