"""The recursive double complexes M(alpha) over the admissible-index DAG.

For an index ``alpha`` at level ``ell`` (the base case) ``M(alpha)`` has
column 0 equal to the sum of ``H^0`` of the cover elements and column 1 the
sum of ``H^0`` of their pairwise intersections, joined by the Cech
difference map.  For lower levels, with ``n = ell - level + 1``:

* ``(0, 0)`` is the sum of ``H^0(X_e)`` over ``e`` in ``C(alpha)``;
* ``(p, q)`` for ``p >= 1`` and ``p + q <= n`` is the sum over ``(p+1)``-fold
  products ``T`` of ``C(alpha)`` of ``Tot^q(M(T))``;
* the vertical map is the total differential of each ``M(T)``;
* the horizontal map is the alternating sum of ``Tot^q`` of the restriction
  maps ``r_{face, T}``, and out of ``(0, 0)`` it is the difference of
  ``H^0`` restrictions.

``r_{alpha, beta}: M(alpha) -> M(beta)`` for a same-level ancestor ``alpha``
of ``beta`` sends the summand of a product ``B`` of ``C(beta)`` to the
summand of ``a(B)``, the product of unique ancestors in ``C(alpha)``, with
the sign of the permutation sorting ``a(B)``.  When two factors of ``B``
share an ancestor the block is zero, as for alternating Cech cochains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .admissible import AdmissibleDag, CoverOracle, build_dag, unique_ancestor
from .complex import GradedComplex, cohomology_dims
from .doublecomplex import DoubleComplex, DoubleComplexMap, total_complex, total_map, total_map_block
from .exceptions import BuildOrderError, DagConstructionError, MVBettiError
from .linalg import QMatrix, assemble, kernel_basis, rank
from .simplicial import (
    SubcomplexRef,
    connected_components,
    h0_restriction,
    intersect,
    simplicial_cohomology,
)

__all__ = [
    "MComplex",
    "MComplexStore",
    "build_base",
    "build_inductive",
    "build_restriction",
    "betti",
    "VerificationReport",
    "verify_store",
    "h0_embedding",
    "h0_functorial",
]

Bidegree = tuple[int, int]


@dataclass
class MComplex:
    """``M(alpha)`` together with the block layout of each term.

    ``layout[(p, q)]`` maps a summand key to ``(offset, size)``.  Keys are
    cover-element ids in column 0 and ascending element tuples elsewhere.
    ``spaces`` gives the set of each key.
    """

    alpha: int
    n: int
    dc: DoubleComplex
    layout: dict[Bidegree, dict[tuple[int, ...] | int, tuple[int, int]]]
    spaces: dict[Hashable, SubcomplexRef] = field(repr=False)

    @property
    def tot(self) -> GradedComplex:
        return total_complex(self.dc)


def _sorted_with_sign(items: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """``(sign, sorted tuple)``; sign 0 when an item repeats."""
    items = list(items)
    if len(set(items)) < len(items):
        return 0, ()
    sign = 1
    # bubble sort; tuples here have at most ell + 2 entries
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


def _column_zero(dag: AdmissibleDag, alpha: int):
    lay, spaces, off = {}, {}, 0
    for e in dag.covers[alpha]:
        x = dag[e].space
        c = connected_components(x).count
        spaces[e] = x
        if c:
            lay[e] = (off, c)
            off += c
    return lay, spaces, off


class MComplexStore:
    """Memoised ``M(alpha)`` and restriction maps for one DAG.

    Complexes are built bottom-up, level ``ell`` first; reading a complex
    that has not been built raises :class:`BuildOrderError`.  With
    ``check=True`` every double complex and map is validated as it is made.
    """

    def __init__(self, dag: AdmissibleDag, check: bool = True):
        self.dag = dag
        self.check = check
        self.complexes: dict[int, MComplex] = {}
        self.restrictions: dict[tuple[int, int], DoubleComplexMap] = {}
        self._tot_blocks: dict[tuple[int, int, int], QMatrix] = {}

    # ------------------------------------------------------------------ access

    def __getitem__(self, alpha: int) -> MComplex:
        got = self.complexes.get(alpha)
        if got is None:
            raise BuildOrderError(f"M({self.dag.describe(alpha)}) read before it was built")
        return got

    def __contains__(self, alpha: int) -> bool:
        return alpha in self.complexes

    def required(self) -> list[int]:
        """Indices whose complexes the root depends on, deepest level first."""
        need, stack = {0}, [0]
        while stack:
            a = stack.pop()
            if self.dag[a].level >= self.dag.ell:
                continue
            for t, pid in self.dag.products.items():
                if self.dag[pid].parent == a and pid not in need:
                    need.add(pid)
                    stack.append(pid)
        return sorted(need, key=lambda i: (-self.dag[i].level, i))

    def build(self, indices: Sequence[int] | None = None) -> MComplex:
        """Build ``indices`` (default: what the root needs) and return ``M(0)``."""
        if indices is None:
            indices = self.required()
        else:
            indices = sorted(set(indices), key=lambda i: (-self.dag[i].level, i))
        for a in indices:
            if a not in self.complexes:
                if self.dag[a].level == self.dag.ell:
                    self.complexes[a] = build_base(a, self.dag, check=self.check)
                else:
                    self.complexes[a] = build_inductive(a, self.dag, self)
        return self.complexes.get(0)

    def all_indices(self) -> list[int]:
        return [ix.id for ix in self.dag.indices if ix.level <= self.dag.ell]

    # ---------------------------------------------------------------- maps

    def restriction(self, a: int, b: int) -> DoubleComplexMap:
        key = (a, b)
        got = self.restrictions.get(key)
        if got is None:
            got = self.restrictions[key] = build_restriction(a, b, self.dag, self)
        return got

    def tot_restriction(self, a: int, b: int, q: int) -> QMatrix:
        """``Tot^q(r_{a, b})``."""
        key = (a, b, q)
        got = self._tot_blocks.get(key)
        if got is None:
            got = self._tot_blocks[key] = total_map_block(self.restriction(a, b), q)
        return got


def build_base(alpha: int, dag: AdmissibleDag, check: bool = True) -> MComplex:
    """``M(alpha)`` for an index at level ``ell``: a Cech complex on ``H^0``."""
    if dag[alpha].level != dag.ell:
        raise ValueError(f"{dag.describe(alpha)} is not at level {dag.ell}")
    lay0, spaces, n0 = _column_zero(dag, alpha)
    elems = dag.covers[alpha]
    lay1, off = {}, 0
    for i, e0 in enumerate(elems):
        for e1 in elems[i + 1:]:
            x = intersect([spaces[e0], spaces[e1]])
            if x:
                c = connected_components(x).count
                spaces[(e0, e1)] = x
                lay1[(e0, e1)] = (off, c)
                off += c
    placed = []
    for (e0, e1), (roff, _) in lay1.items():
        x = spaces[(e0, e1)]
        placed.append((roff, lay0[e1][0], h0_restriction(spaces[e1], x)))
        placed.append((roff, lay0[e0][0], -h0_restriction(spaces[e0], x)))
    dims = {(0, 0): n0, (1, 0): off}
    horiz = {(0, 0): assemble(off, n0, placed)}
    dc = DoubleComplex(dims, horiz, {}, check=check)
    layout = {k: v for k, v in (((0, 0), lay0), ((1, 0), lay1)) if v}
    return MComplex(alpha, 1, dc, layout, spaces)


def build_inductive(alpha: int, dag: AdmissibleDag, store: MComplexStore) -> MComplex:
    """``M(alpha)`` for an index below level ``ell`` from its children's complexes."""
    level = dag[alpha].level
    if level >= dag.ell:
        raise ValueError(f"{dag.describe(alpha)} is at the base level")
    n = dag.ell - level + 1
    lay0, spaces, n0 = _column_zero(dag, alpha)
    layout: dict[Bidegree, dict] = {}
    dims: dict[Bidegree, int] = {}
    if n0:
        layout[(0, 0)] = lay0
        dims[(0, 0)] = n0

    by_size: dict[int, list[tuple[int, ...]]] = {}
    for t, pid in dag.products.items():
        if dag[pid].parent == alpha:
            by_size.setdefault(len(t), []).append(t)
    children: dict[tuple[int, ...], MComplex] = {}
    for size, ts in by_size.items():
        for t in sorted(ts):
            children[t] = store[dag.products[t]]
            spaces[t] = dag[dag.products[t]].space
    for p in range(1, n + 1):
        ts = sorted(by_size.get(p + 1, ()))
        for q in range(0, n - p + 1):
            lay, off = {}, 0
            for t in ts:
                d = children[t].tot.dim(q)
                if d:
                    lay[t] = (off, d)
                    off += d
            if off:
                layout[(p, q)] = lay
                dims[(p, q)] = off

    vert: dict[Bidegree, QMatrix] = {}
    horiz: dict[Bidegree, QMatrix] = {}
    for (p, q), lay in layout.items():
        up = layout.get((p, q + 1)) if p >= 1 else None
        if up:
            placed = [
                (up[t][0], off, children[t].tot.diff(q)) for t, (off, _) in lay.items() if t in up
            ]
            vert[(p, q)] = assemble(dims[(p, q + 1)], dims[(p, q)], placed)
        right = layout.get((p + 1, q))
        if not right:
            continue
        placed = []
        if p == 0:
            for (e0, e1), (roff, _) in right.items():
                child = children[(e0, e1)]
                for g, (goff, _) in child.layout.get((0, 0), {}).items():
                    xg = child.spaces[g]
                    placed.append((roff + goff, lay[e1][0], h0_restriction(spaces[e1], xg)))
                    placed.append((roff + goff, lay[e0][0], -h0_restriction(spaces[e0], xg)))
        else:
            for t2, (roff, _) in right.items():
                tid = dag.products[t2]
                for i in range(len(t2)):
                    face = t2[:i] + t2[i + 1:]
                    if face not in lay:
                        continue
                    block = store.tot_restriction(dag.products[face], tid, q)
                    placed.append((roff, lay[face][0], block if i % 2 == 0 else -block))
        horiz[(p, q)] = assemble(dims[(p + 1, q)], dims[(p, q)], placed)
    dc = DoubleComplex(dims, horiz, vert, check=store.check)
    return MComplex(alpha, n, dc, layout, spaces)


def build_restriction(a: int, b: int, dag: AdmissibleDag, store: MComplexStore) -> DoubleComplexMap:
    """``r_{a, b}: M(a) -> M(b)`` where ``a`` is ``b`` or a same-level ancestor of it."""
    src, tgt = store[a], store[b]
    if a == b:
        mats = {k: QMatrix.identity(d) for k, d in src.dc.dims.items()}
        return DoubleComplexMap(src.dc, tgt.dc, mats, check=False)
    if a not in dag.same_level[b]:
        raise ValueError(f"{dag.describe(a)} is not a same-level ancestor of {dag.describe(b)}")
    amap = {e: unique_ancestor(dag, e, a) for e in dag.covers[b]}
    base = dag[b].level == dag.ell
    mats = {}
    for (p, q), lay in tgt.layout.items():
        src_lay = src.layout.get((p, q), {})
        placed = []
        for key, (roff, _) in lay.items():
            if p == 0:
                img = amap[key]
                if img in src_lay:
                    placed.append((roff, src_lay[img][0], h0_restriction(src.spaces[img], tgt.spaces[key])))
                continue
            sign, img = _sorted_with_sign([amap[x] for x in key])
            if not sign or img not in src_lay:
                continue
            if base:
                block = h0_restriction(src.spaces[img], tgt.spaces[key])
            else:
                t_id = dag.product_id(img)
                if t_id is None:
                    raise DagConstructionError(f"missing product {img} under {dag.describe(a)}")
                block = store.tot_restriction(t_id, dag.products[key], q)
            placed.append((roff, src_lay[img][0], block if sign > 0 else -block))
        mats[(p, q)] = assemble(tgt.dc.dim(p, q), src.dc.dim(p, q), placed)
    return DoubleComplexMap(src.dc, tgt.dc, mats, check=store.check)


def betti(
    s: SubcomplexRef,
    ell: int,
    oracle: CoverOracle | None = None,
    check: bool = False,
) -> list[int]:
    """``b_0..b_ell`` of ``s`` as ranks of ``H^j(Tot(M(0)))``."""
    dag = build_dag(s, ell, oracle)
    store = MComplexStore(dag, check=check)
    root = store.build()
    return (cohomology_dims(root.tot) + [0] * (ell + 1))[: ell + 1]


@dataclass
class VerificationReport:
    complexes: int = 0
    maps: int = 0
    matrices: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _rank_nullity(m: QMatrix) -> bool:
    return rank(m) + kernel_basis(m).cols == m.cols


def verify_store(store: MComplexStore, full: bool = True, compare_cohomology: bool = True) -> VerificationReport:
    """Rebuild every check on a store and collect the failures.

    With ``full`` all indices of levels ``0..ell`` are built, not only what
    the root needs.  With ``compare_cohomology`` each ``H^j(Tot(M(alpha)))``
    for ``j <= ell - level`` is compared with the simplicial cohomology of
    ``X_alpha``.
    """
    dag = store.dag
    store.build(store.all_indices() if full else None)
    rep = VerificationReport()

    def guard(what, fn):
        try:
            if fn() is False:
                rep.violations.append(what)
        except MVBettiError as exc:
            rep.violations.append(f"{what}: {exc}")

    for a, mc in sorted(store.complexes.items()):
        rep.complexes += 1
        name = dag.describe(a)
        guard(f"M({name}) commutation", mc.dc.check)
        guard(f"Tot(M({name})) D D = 0", lambda: total_complex(mc.dc).check())
        for m in (*mc.dc.horiz.values(), *mc.dc.vert.values(), *mc.tot.diffs):
            rep.matrices += 1
            if not _rank_nullity(m):
                rep.violations.append(f"rank-nullity fails in M({name})")
        if compare_cohomology:
            top = dag.ell - dag[a].level
            got = (cohomology_dims(mc.tot) + [0] * (top + 1))[: top + 1]
            want = (simplicial_cohomology(dag[a].space) + [0] * (top + 1))[: top + 1]
            if got != want:
                rep.violations.append(f"H(Tot(M({name}))) = {got}, H(X) = {want}")

    for b in list(store.complexes):
        for a in sorted(dag.same_level[b]):
            if a not in store.complexes:
                continue
            rep.maps += 1
            pair = f"r({dag.describe(a)}, {dag.describe(b)})"
            try:
                r = store.restriction(a, b)
                r.check()
                total_map(r).check()
            except MVBettiError as exc:
                rep.violations.append(f"{pair}: {exc}")
                continue
            for m in r.mats.values():
                rep.matrices += 1
                if not _rank_nullity(m):
                    rep.violations.append(f"rank-nullity fails in {pair}")
            if not h0_functorial(store, a, b):
                rep.violations.append(f"{pair} does not induce the H^0 restriction")
    return rep


def h0_embedding(store: MComplexStore, a: int) -> QMatrix:
    """``H^0(X_a) -> M^{0,0}(a)``, restricting a locally constant function to every element."""
    mc = store[a]
    x = store.dag[a].space
    lay = mc.layout.get((0, 0), {})
    placed = [(off, 0, h0_restriction(x, mc.spaces[e])) for e, (off, _) in lay.items()]
    return assemble(mc.dc.dim(0, 0), connected_components(x).count, placed)


def h0_functorial(store: MComplexStore, a: int, b: int) -> bool:
    """Whether ``r_{a, b}`` agrees on degree 0 with restriction ``H^0(X_a) -> H^0(X_b)``.

    ``Tot^0`` is the ``(0, 0)`` term and its cocycles are exactly the
    embedded locally constant functions, so the comparison is a matrix
    identity.
    """
    r = store.restriction(a, b)
    lhs = r.at(0, 0) @ h0_embedding(store, a)
    rhs = h0_embedding(store, b) @ h0_restriction(store.dag[a].space, store.dag[b].space)
    return lhs == rhs

