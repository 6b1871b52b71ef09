import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from mvbetti import build_dag, load_example
from mvbetti.complex import cohomology_dims
from mvbetti.exceptions import BuildOrderError
from mvbetti.linalg import rank
from mvbetti.mvrecursion import MComplexStore, betti, build_base, h0_functorial, verify_store
from mvbetti.simplicial import SimplicialComplex, minimal_star_vertices, star_of

from oracles import betti_numbers, components, equal_up_to_signed_permutation
from strategies import facet_lists


def _rows(m):
    return [[Fraction(x) for x in r] for r in m.to_lists()]


@pytest.fixture(scope="module")
def s2_store(octahedron):
    dag = build_dag(octahedron.space, 2, octahedron.cover_oracle())
    store = MComplexStore(dag, check=True)
    store.build(store.all_indices())
    return store


def _index(dag, level, label):
    (i,) = [i for i in dag.level_ids(level) if dag.describe(i) == label]
    return i


def test_s2_betti(octahedron):
    assert betti(octahedron.space, 2, octahedron.cover_oracle(), check=True) == [1, 0, 1]


def test_s2_root_terms(s2_store):
    dc = s2_store[0].dc
    assert dc.dims == {(0, 0): 2, (1, 0): 2, (1, 1): 2}
    ones = [[1, 1], [1, 1]]
    for m in (dc.h(0, 0), dc.v(1, 0)):
        assert equal_up_to_signed_permutation(_rows(m), ones)
        assert rank(m) == 1


def test_s2_intermediate_complexes(s2_store):
    dag = s2_store.dag
    b34 = _index(dag, 2, "C1*C2")
    a12 = _index(dag, 1, "H1*H2")
    assert cohomology_dims(s2_store[b34].tot)[:1] == [2]
    assert (cohomology_dims(s2_store[a12].tot) + [0, 0])[:2] == [1, 1]


def test_s2_verification_is_clean(s2_store):
    rep = verify_store(s2_store)
    assert rep.ok, rep.violations
    assert rep.complexes == 9
    assert rep.maps > 0


def test_reading_unbuilt_complex(octahedron):
    store = MComplexStore(build_dag(octahedron.space, 1, octahedron.cover_oracle()))
    with pytest.raises(BuildOrderError):
        store[0]


def test_base_case_counts_components():
    cx = SimplicialComplex.from_facets([("a", "b"), ("c", "d")])
    x = cx.full
    parts = lambda s: [("L", cx.subcomplex([("a", "b")]) & s), ("R", cx.subcomplex([("c", "d")]) & s)]  # noqa: E731
    dag = build_dag(x, 0, parts)
    mc = build_base(0, dag)
    assert mc.dc.dims.get((0, 0)) == 2
    assert cohomology_dims(mc.tot)[:1] == [2]
    assert betti(x, 0, parts) == [2]


def test_base_case_requires_top_level(octahedron):
    dag = build_dag(octahedron.space, 1, octahedron.cover_oracle())
    with pytest.raises(ValueError):
        build_base(0, dag)


@pytest.mark.parametrize("name,expected", [
    ("circle", [1, 1, 0]),
    ("torus", [1, 2, 1]),
    ("projective-plane", [1, 0, 0]),
    ("two-triangles", [2, 0, 0]),
    ("octahedron", [1, 0, 1]),
])
def test_star_cover_examples(name, expected):
    f = load_example(name)
    for ell in range(3):
        assert betti(f.space, ell) == expected[: ell + 1]


def test_restrictions_induce_h0_restriction(s2_store):
    dag = s2_store.dag
    for b in s2_store.complexes:
        for a in dag.same_level[b]:
            assert h0_functorial(s2_store, a, b)


def test_restriction_endpoints(s2_store):
    dag = s2_store.dag
    b3 = _index(dag, 2, "C1")
    b34 = _index(dag, 2, "C1*C2")
    r = s2_store.restriction(b3, b34)
    assert r.source is s2_store[b3].dc and r.target is s2_store[b34].dc
    r.check()


class RandomStarOracle:
    """Greedy stars plus a few extra stars, chosen reproducibly per set."""

    def __init__(self, seed):
        self.seed = seed

    def __call__(self, x):
        rng = random.Random(hash((self.seed, tuple(sorted(x.member)))))
        base = set(minimal_star_vertices(x))
        extra = [v for v in x.vertex_ids() if v not in base and rng.random() < 0.25]
        names = x.ambient.vertices
        return [(f"st({names[v]})", star_of(x, v)) for v in sorted(base | set(extra))]


@settings(max_examples=25, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
@given(facets=facet_lists(max_vertices=7, max_facets=6, max_dim=2), ell=st.integers(0, 2), seed=st.integers(0, 10))
def test_random_complexes_match_oracle(facets, ell, seed):
    cx = SimplicialComplex.from_facets(facets)
    dag = build_dag(cx.full, ell, RandomStarOracle(seed))
    assume(len(dag) <= 60)
    store = MComplexStore(dag, check=True)
    root = store.build()
    got = (cohomology_dims(root.tot) + [0] * (ell + 1))[: ell + 1]
    assert got == (betti_numbers(facets) + [0] * (ell + 1))[: ell + 1]
    assert got[0] == components(facets)
    rep = verify_store(store)
    assert rep.ok, rep.violations
