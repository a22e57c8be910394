import math

import pytest

from delooper.permutohedron import (
    ResourceError,
    build_permutohedron,
    compatible_schema,
    compatible_sequence_schema,
    label,
    ordered_partitions,
    proper_factors,
    simplex_face_index,
)
from delooper.words import FaceWord, all_face_words


def test_p2_is_hexagon():
    L = build_permutohedron(2)
    counts = {d: len(fs) for d, fs in L.by_dimension().items()}
    assert counts == {0: 6, 1: 6, 2: 1}


def test_p0_is_point():
    L = build_permutohedron(0)
    assert len(L.faces) == 1


def test_p3_counts():
    L = build_permutohedron(3)
    counts = {d: len(fs) for d, fs in L.by_dimension().items()}
    assert counts == {0: 24, 1: 36, 2: 14, 3: 1}


@pytest.mark.parametrize("k", range(0, 7))
def test_vertex_counts(k):
    assert len(build_permutohedron(k).vertices()) == math.factorial(k + 1)


@pytest.mark.parametrize("k", range(1, 6))
def test_boundary_euler_characteristic(k):
    L = build_permutohedron(k)
    assert L.boundary_euler_characteristic() == 1 + (-1) ** (k - 1)


def test_lattice_is_graded_by_refinement():
    L = build_permutohedron(2)
    for f in L.faces:
        for g in L.faces:
            if f.refines(g):
                assert f.dimension <= g.dimension


def test_resource_bound():
    with pytest.raises(ResourceError):
        build_permutohedron(8)


def test_factorization_closure_counts():
    w = FaceWord(2, (0, 0))
    assert len(w.factorizations()) == 2
    w3 = FaceWord(3, (0, 0, 0))
    assert len(w3.factorizations()) == 6


def test_labeling_hexagon():
    delta = FaceWord(3, (0, 0, 0))
    lab = label(delta)
    assert len(lab.vertex_labels) == 6
    for face, words in lab.face_labels.items():
        # blocks compose to delta
        flat = []
        for w in words:
            flat.extend(w.letters)
        assert FaceWord(3, tuple(flat)).normal_form() == delta.normal_form()
        # factor polytope dimensions sum to the face dimension
        assert sum(len(w) - 1 for w in words) == face.dimension


def test_labeling_refinement_consistency():
    delta = FaceWord(3, (2, 0, 1))
    lab = label(delta)
    for f in lab.lattice.faces:
        for g in lab.lattice.faces:
            if f.refines(g) and f.dimension + 1 == g.dimension:
                # f's blocks subdivide g's, and the words match blockwise
                fw = [w.letters for w in lab.face_labels[f]]
                gw = [w.letters for w in lab.face_labels[g]]
                assert sum(len(x) for x in fw) == sum(len(x) for x in gw)


def test_label_interval():
    lab = label(FaceWord(2, (0, 0)))
    assert len(lab.vertex_labels) == 2


def test_label_requires_length_two():
    with pytest.raises(ValueError):
        label(FaceWord(3, (1,)))


def test_proper_factors_generic_length_two():
    # distinct deleted vertices with a gap: four distinct single-letter factors
    pf = proper_factors(FaceWord(2, (2, 0)))
    assert len(pf.factors) == 4
    assert all(len(w) == 1 for w in pf.factors)


def test_proper_factors_repeated_letters_dedupe():
    pf = proper_factors(FaceWord(2, (0, 0)))
    assert len(pf.factors) == 3


def test_proper_factors_length_one_empty():
    pf = proper_factors(FaceWord(2, (1,)))
    assert pf.factors == frozenset()


def test_proper_factors_length_three():
    delta = FaceWord(3, (0, 0, 0))
    pf = proper_factors(delta)
    lengths = {len(w) for w in pf.factors}
    assert lengths == {1, 2}
    # every factor appears inside some factorization as a contiguous block
    closure = delta.factorizations()
    seen = set()
    for word in closure:
        for start in range(len(word.letters)):
            for stop in range(start + 1, len(word.letters) + 1):
                if (start, stop) == (0, len(word.letters)):
                    continue
                sub = FaceWord(word.source_dim - start, word.letters[start:stop]).normal_form()
                seen.add(sub)
    assert seen == set(pf.factors)


def test_schema_hexagon_counts():
    sch = compatible_schema(FaceWord(3, (0, 0, 0)))
    assert sch.constraint_count() == 6
    assert len(sch.assembly) == 6
    units = [u for u in sch.unit_constraints]
    assert all(len(w) == 1 for (w, _, _) in units)
    for eq in sch.equations:
        for block in eq.blocks:
            assert block.normal_form() in sch.slots
        # block-size bookkeeping: factor polytope dims sum to the face dim
        face_dim = 3 - len(eq.partition)
        assert sum(eq.factor_dims) == face_dim


def test_schema_interval():
    sch = compatible_schema(FaceWord(2, (0, 0)))
    assert sch.constraint_count() == 0
    assert len(sch.assembly) == 2  # two boundary points
    assert len(sch.unit_constraints) == len(sch.slots)


def test_schema_length_one_error():
    with pytest.raises(ValueError):
        compatible_schema(FaceWord(4, (2,)))


def test_schema_constraint_count_matches_face_count():
    """Positive-codimension non-vertex faces of P_k, counted per instance."""
    for letters, dim in [((0, 0), 2), ((0, 0, 0), 3), ((2, 0, 1), 3)]:
        delta = FaceWord(dim, letters)
        k = len(letters) - 1
        sch = compatible_schema(delta)
        expected = sum(
            1
            for p in ordered_partitions(range(1, k + 2))
            if 2 <= len(p) <= k
        )
        assert sch.constraint_count() == expected


def test_simplex_face_index_counts():
    idx1 = simplex_face_index(1)
    assert {k: len(idx1.faces_of_dimension(k)) for k in range(2)} == {0: 2, 1: 1}
    idx2 = simplex_face_index(2)
    assert {k: len(idx2.faces_of_dimension(k)) for k in range(3)} == {0: 3, 1: 3, 2: 1}
    idx3 = simplex_face_index(3)
    assert {k: len(idx3.faces_of_dimension(k)) for k in range(4)} == {0: 4, 1: 6, 2: 4, 3: 1}
    for k in range(4):
        assert len(idx3.faces_of_dimension(k)) == math.comb(4, k + 1)


def test_simplex_face_words_normal():
    idx = simplex_face_index(3)
    for w in idx.faces:
        assert w.is_normal()


def test_sequence_schema_counts():
    seq2 = compatible_sequence_schema(2)
    assert len(seq2.equations) == 3
    seq3 = compatible_sequence_schema(3)
    assert len(seq3.equations) == 10
    assert len(seq3.assembly) == 4
    for eq in seq3.equations:
        assert eq.parent in simplex_face_index(3).faces
        assert eq.level + 1 <= 2


def test_sequence_schema_range():
    with pytest.raises(ValueError):
        compatible_sequence_schema(1)
