from itertools import combinations

import pytest

from mvbetti import build_dag, dag_stats, load_example, unique_ancestor
from mvbetti.admissible import ExplicitCoverOracle, StarCoverOracle
from mvbetti.exceptions import CoverError, DagConstructionError
from mvbetti.simplicial import SimplicialComplex

from reference_dag import dag_signature, ref_signature, reference_dag


@pytest.fixture(scope="module")
def s2_dag(octahedron):
    return build_dag(octahedron.space, 2, octahedron.cover_oracle())


def _labels(dag, level):
    return sorted(dag.describe(i) for i in dag.level_ids(level))


def _by_label(dag, level, label):
    (i,) = [i for i in dag.level_ids(level) if dag.describe(i) == label]
    return i


def test_s2_level_counts(s2_dag):
    st = dag_stats(s2_dag)
    assert st.counts_per_level == (1, 3, 5)
    assert st.total_indices == 9
    assert st.max_cover_size == 2
    assert st.leaf_elements == 6


def test_s2_indices_and_covers(s2_dag, octahedron):
    dag = s2_dag
    assert _labels(dag, 1) == ["H1", "H1*H2", "H2"]
    assert _labels(dag, 2) == ["C1", "C1*C2", "C2", "H1", "H2"]
    assert _labels(dag, 3) == ["C1", "C2", "H1", "H2", "P1", "P2"]
    a12 = _by_label(dag, 1, "H1*H2")
    assert dag[a12].space == octahedron.lookup("H12")
    assert sorted(dag.describe(e) for e in dag.covers[a12]) == ["C1", "C2"]
    b34 = _by_label(dag, 2, "C1*C2")
    assert dag[b34].space == octahedron.lookup("C12")
    assert sorted(dag.describe(e) for e in dag.covers[b34]) == ["P1", "P2"]


def test_s2_same_level_ancestors(s2_dag):
    dag = s2_dag
    a1, a2, a12 = (_by_label(dag, 1, x) for x in ("H1", "H2", "H1*H2"))
    assert dag.same_level[a12] == {a1, a2}
    assert not dag.same_level[a1] and not dag.same_level[a2]
    b1, b2, b3, b4, b34 = (_by_label(dag, 2, x) for x in ("H1", "H2", "C1", "C2", "C1*C2"))
    assert dag.same_level[b3] == {b1, b2}
    assert dag.same_level[b34] == {b1, b2, b3, b4}
    # the choice made for the ancestors of H1*H2 is recorded on its elements
    assert dag[b3].provenance == {a1: b1, a2: b2}


def test_unique_ancestor_same_level(s2_dag):
    dag = s2_dag
    b34 = _by_label(dag, 2, "C1*C2")
    b3 = _by_label(dag, 2, "C1")
    p1 = _by_label(dag, 3, "P1")
    c1 = _by_label(dag, 3, "C1")
    assert unique_ancestor(dag, p1, b34) == p1
    assert unique_ancestor(dag, p1, b3) == c1


def test_unique_ancestor_cross_level_is_ambiguous(s2_dag):
    # P1 lies below both C1 and C2, which are the two elements of C(H1*H2)
    dag = s2_dag
    p1 = _by_label(dag, 3, "P1")
    a12 = _by_label(dag, 1, "H1*H2")
    with pytest.raises(DagConstructionError):
        unique_ancestor(dag, p1, a12)


def test_unique_ancestor_rejects_non_ancestor(s2_dag):
    dag = s2_dag
    h1 = _by_label(dag, 3, "H1")
    b2 = _by_label(dag, 2, "H2")
    with pytest.raises(ValueError):
        unique_ancestor(dag, h1, b2)
    with pytest.raises(ValueError):
        unique_ancestor(dag, _by_label(dag, 2, "C1*C2"), b2)


def test_ancestor_maps_need_not_be_injective(s2_dag):
    dag = s2_dag
    b1 = _by_label(dag, 2, "H1")
    b3, b4 = _by_label(dag, 2, "C1"), _by_label(dag, 2, "C2")
    a1 = dag[b1].parent
    assert unique_ancestor(dag, b3, a1) == unique_ancestor(dag, b4, a1) == b1


def test_single_part_covers_give_a_chain(triangle):
    oracle = lambda x: [("X", x)]  # noqa: E731
    for ell in range(4):
        dag = build_dag(triangle.full, ell, oracle)
        assert dag_stats(dag).counts_per_level == (1,) * (ell + 1)
        assert dag_stats(dag).leaf_elements == 1


def test_negative_ell_rejected(triangle):
    with pytest.raises(ValueError):
        build_dag(triangle.full, -1)


def test_cover_must_cover(triangle):
    edge = triangle.subcomplex([("a", "b")])
    with pytest.raises(CoverError):
        build_dag(triangle.full, 1, lambda x: [("e", edge)])


def test_cover_parts_must_be_contained(circle):
    other = SimplicialComplex.from_facets([("a", "b")]).full
    with pytest.raises(CoverError):
        build_dag(circle.space, 0, lambda x: [("x", x), ("y", other)])


def test_explicit_oracle_missing_entry_and_fallback(octahedron):
    partial = ExplicitCoverOracle({octahedron.space: octahedron.root_cover()})
    with pytest.raises(CoverError):
        build_dag(octahedron.space, 1, partial)
    dag = build_dag(octahedron.space, 1, octahedron.cover_oracle(fallback=StarCoverOracle()))
    assert dag_stats(dag).counts_per_level[:2] == (1, 3)


CASES = [
    ("circle", 1, False),
    ("circle", 2, True),
    ("octahedron", 2, True),
    ("torus", 1, True),
    ("projective-plane", 1, True),
    ("two-triangles", 2, True),
]


@pytest.fixture(scope="module", params=CASES, ids=lambda c: f"{c[0]}-{c[1]}-{'min' if c[2] else 'full'}")
def built(request):
    name, ell, minimal = request.param
    space = load_example(name).space
    oracle = StarCoverOracle(minimal=minimal)
    return build_dag(space, ell, oracle), space, ell, oracle


def test_matches_literal_enumeration(built):
    dag, space, ell, oracle = built
    ref = reference_dag(space, ell, oracle)
    sd, sr = dag_signature(dag), ref_signature(ref)

    def view(sig, n, level, space_of, same, cover):
        return {sig(i): (level(i), space_of(i), frozenset(map(sig, same(i))), frozenset(map(sig, cover(i))))
                for i in range(n)}

    mine = view(sd, len(dag), lambda i: dag[i].level, lambda i: dag[i].space,
                lambda i: dag.same_level.get(i, ()), lambda i: dag.covers.get(i, ()))
    theirs = view(sr, len(ref.level), lambda i: ref.level[i], lambda i: ref.space[i],
                  lambda i: ref.same.get(i, ()), lambda i: ref.cover.get(i, ()))
    assert len(mine) == len(dag)
    assert mine == theirs


def test_ancestor_invariants(built):
    dag = built[0]
    anc = dag.ancestors
    for i in range(len(dag)):
        assert i not in anc[i]
        for j in anc[i]:
            assert dag[i].space.member <= dag[j].space.member
            assert i not in anc[j]
            assert anc[j] <= anc[i]
        if dag[i].parent is not None:
            assert dag[i].parent in anc[i]


def test_products_and_elements(built):
    dag, _, ell, _ = built
    for i in range(len(dag)):
        ix = dag[i]
        if ix.parent is None or ix.is_element:
            continue
        siblings = dag.covers[ix.parent]
        assert 2 <= len(ix.factors) <= ell - dag[ix.parent].level + 2
        assert set(ix.factors) <= set(siblings)
        x = dag[ix.factors[0]].space
        for f in ix.factors[1:]:
            x = x & dag[f].space
        assert x == ix.space and len(x) > 0
    for a, elems in dag.covers.items():
        union = set()
        for e in elems:
            union |= dag[e].space.member
        assert union == dag[a].space.member


def test_unique_ancestor_composes(built):
    dag = built[0]
    for a, elems in dag.covers.items():
        chain = sorted(dag.same_level[a])
        for e in elems:
            for b in chain:
                got = unique_ancestor(dag, e, b)
                assert dag[got].parent == b
                for c in dag.same_level[b]:
                    assert unique_ancestor(dag, got, c) == unique_ancestor(dag, e, c)


def test_full_star_products_cover_all_nonempty_tuples(circle):
    dag = build_dag(circle.space, 1, StarCoverOracle(minimal=False))
    parts = dag.covers[0]
    want = {frozenset(t) for k in (2, 3) for t in combinations(parts, k)
            if len(_meet(dag, t))}
    got = {frozenset(dag[i].factors) for i in dag.level_ids(1) if not dag[i].is_element}
    assert got == want


def _meet(dag, t):
    x = dag[t[0]].space
    for f in t[1:]:
        x = x & dag[f].space
    return x
