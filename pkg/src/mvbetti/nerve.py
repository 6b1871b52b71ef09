"""The nerve complex of a cover, built from H^0 of intersections only."""

from __future__ import annotations

from typing import Sequence

from .complex import GradedComplex, cohomology_dims
from .exceptions import IncompleteNerveError, PropertyViolationError
from .linalg import QMatrix, assemble
from .simplicial import (
    ComponentDecomposition,
    SubcomplexRef,
    _check_cover,
    connected_components,
    h0_restriction,
    intersect,
)

__all__ = ["NerveData", "nerve_complex", "betti_via_nerve", "betti_zero_one"]


class NerveData:
    """Components of every nonempty tuple intersection of an ordered cover.

    Tuples are strictly ascending in cover order and are populated lazily
    up to a size bound; a tuple that is absent within the populated depth
    has an empty intersection (``H^0 = 0``).
    """

    def __init__(self, parts: Sequence[SubcomplexRef], labels: Sequence[str] | None = None,
                 space: SubcomplexRef | None = None):
        self.parts = list(parts)
        self.cover_labels = list(labels) if labels is not None else [str(i) for i in range(len(parts))]
        if len(self.cover_labels) != len(self.parts):
            raise ValueError("one label per cover part is required")
        if space is not None:
            _check_cover(space, self.parts)
        self.depth = 0
        self.sets: dict[tuple[int, ...], SubcomplexRef] = {}
        self.components: dict[tuple[int, ...], ComponentDecomposition] = {}
        self.restrictions: dict[tuple[tuple[int, ...], tuple[int, ...]], QMatrix] = {}

    def populate(self, depth: int) -> "NerveData":
        """Fill in every tuple with at most ``depth`` elements."""
        n = len(self.parts)
        while self.depth < depth:
            size = self.depth + 1
            if size == 1:
                new = {(i,): p for i, p in enumerate(self.parts) if p}
            else:
                new = {}
                for t, x in self.sets.items():
                    if len(t) != size - 1:
                        continue
                    for j in range(t[-1] + 1, n):
                        y = intersect([x, self.parts[j]])
                        if y:
                            new[t + (j,)] = y
            for t, x in new.items():
                self.sets[t] = x
                self.components[t] = connected_components(x)
                if size > 1:
                    for i in range(size):
                        face = t[:i] + t[i + 1:]
                        self.restrictions[(face, t)] = h0_restriction(self.sets[face], x)
            self.depth = size
        return self

    def h0_dim(self, t: tuple[int, ...]) -> int:
        if len(t) > self.depth:
            raise IncompleteNerveError(f"tuple {t} beyond populated depth {self.depth}")
        c = self.components.get(t)
        return c.count if c is not None else 0

    def tuples(self, size: int) -> list[tuple[int, ...]]:
        if size > self.depth:
            raise IncompleteNerveError(f"tuples of size {size} not populated (depth {self.depth})")
        return sorted(t for t in self.sets if len(t) == size)


def nerve_complex(nd: NerveData, depth: int) -> GradedComplex:
    """``L^0 -> ... -> L^depth``, the nerve complex truncated after degree ``depth``."""
    if depth + 1 > nd.depth:
        raise IncompleteNerveError(
            f"nerve complex up to degree {depth} needs tuples of size {depth + 1}, populated {nd.depth}"
        )
    layouts = []
    labels = []
    for p in range(depth + 1):
        off, lay, lab = 0, {}, []
        for t in nd.tuples(p + 1):
            c = nd.components[t].count
            lay[t] = off
            lab.extend((tuple(nd.cover_labels[i] for i in t), k) for k in range(c))
            off += c
        layouts.append((lay, off))
        labels.append(lab)
    diffs = []
    for p in range(depth):
        lay, n = layouts[p]
        lay2, n2 = layouts[p + 1]
        placed = []
        for t2, roff in lay2.items():
            for i in range(len(t2)):
                face = t2[:i] + t2[i + 1:]
                m = nd.restrictions[(face, t2)]
                placed.append((roff, lay[face], m if i % 2 == 0 else -m))
        diffs.append(assemble(n2, n, placed))
    return GradedComplex([n for _, n in layouts], diffs, 0, labels)


def _pad(h: list[int], n: int) -> list[int]:
    return (h + [0] * n)[:n]


def betti_via_nerve(nd: NerveData, ell: int) -> list[int]:
    """``b_0..b_ell`` from the nerve, valid when the cover has the Leray property.

    Only the necessary part of the Leray property that the data can see
    (every nonempty intersection is connected) is checked.
    """
    nd.populate(ell + 2)
    for t, c in nd.components.items():
        if c.count > 1:
            raise PropertyViolationError(
                f"intersection {tuple(nd.cover_labels[i] for i in t)} has {c.count} components"
            )
    return _pad(cohomology_dims(nerve_complex(nd, ell + 1)), ell + 1)


def betti_zero_one(nd: NerveData) -> tuple[int, int]:
    """``(b_0, b_1)`` from ``L_2``, valid when every cover part is contractible."""
    nd.populate(3)
    for t in nd.tuples(1):
        if nd.components[t].count != 1:
            raise PropertyViolationError(
                f"cover part {nd.cover_labels[t[0]]} is disconnected, so not contractible"
            )
    h = _pad(cohomology_dims(nerve_complex(nd, 2)), 2)
    return h[0], h[1]
