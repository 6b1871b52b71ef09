"""Bounded cochain complexes of finite-dimensional Q-vector spaces."""

from __future__ import annotations

from typing import Mapping, Sequence

from .exceptions import ChainMapError, MalformedComplexError
from .linalg import QMatrix, block_direct_sum, hstack, kernel_basis, rank

__all__ = [
    "GradedComplex",
    "ComplexMap",
    "cohomology_dims",
    "truncate",
    "direct_sum_complexes",
    "is_quasi_isomorphism",
    "euler_characteristic",
]


class GradedComplex:
    """A complex ``C^lo -> C^(lo+1) -> ... -> C^hi`` with zero spaces outside.

    ``dims[k]`` is the dimension in degree ``min_degree + k`` and
    ``diffs[k]`` is the differential out of that degree, a
    ``dims[k+1] x dims[k]`` matrix.  The differential out of the top
    stored degree is zero, so ``len(diffs) == len(dims) - 1``.

    ``labels``, when given, holds one basis label list per stored degree.
    """

    __slots__ = ("min_degree", "dims", "diffs", "labels")

    def __init__(
        self,
        dims: Sequence[int],
        diffs: Sequence[QMatrix] = (),
        min_degree: int = 0,
        labels: Sequence[Sequence[object]] | None = None,
        check: bool = True,
    ):
        self.min_degree = min_degree
        self.dims = tuple(int(d) for d in dims)
        if any(d < 0 for d in self.dims):
            raise MalformedComplexError(f"negative dimension in {self.dims}")
        diffs = list(diffs)
        if len(self.dims) and len(diffs) == len(self.dims):
            # tolerate an explicit trailing map into the zero space
            tail = diffs.pop()
            if tail.rows != 0 or tail.cols != self.dims[-1]:
                raise MalformedComplexError("trailing differential must map into the zero space")
        if len(diffs) != max(len(self.dims) - 1, 0):
            raise MalformedComplexError(
                f"{len(self.dims)} degrees need {max(len(self.dims) - 1, 0)} differentials, got {len(diffs)}"
            )
        for k, m in enumerate(diffs):
            if m.shape != (self.dims[k + 1], self.dims[k]):
                raise MalformedComplexError(
                    f"differential out of degree {min_degree + k} has shape {m.shape}, "
                    f"expected {(self.dims[k + 1], self.dims[k])}"
                )
        self.diffs = tuple(diffs)
        if labels is not None:
            labels = tuple(tuple(l) for l in labels)
            if [len(l) for l in labels] != list(self.dims):
                raise MalformedComplexError("label lists do not match dimensions")
        self.labels = labels
        if check:
            self.check()

    @classmethod
    def zero(cls) -> "GradedComplex":
        return cls((), ())

    @property
    def max_degree(self) -> int:
        """Top stored degree (``min_degree - 1`` when nothing is stored)."""
        return self.min_degree + len(self.dims) - 1

    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    def dim(self, p: int) -> int:
        k = p - self.min_degree
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def diff(self, p: int) -> QMatrix:
        """The differential ``C^p -> C^(p+1)`` (a zero matrix outside the window)."""
        k = p - self.min_degree
        if 0 <= k < len(self.diffs):
            return self.diffs[k]
        return QMatrix.zeros(self.dim(p + 1), self.dim(p))

    def check(self) -> None:
        """Raise :class:`MalformedComplexError` unless every ``d d`` vanishes."""
        for k in range(len(self.diffs) - 1):
            if not (self.diffs[k + 1] @ self.diffs[k]).is_zero():
                raise MalformedComplexError(
                    f"d^{self.min_degree + k + 1} d^{self.min_degree + k} != 0"
                )

    def __repr__(self) -> str:
        return f"GradedComplex(min_degree={self.min_degree}, dims={list(self.dims)})"


def cohomology_dims(c: GradedComplex) -> list[int]:
    """``dim H^p`` for every stored degree, starting at ``c.min_degree``."""
    ranks = [rank(m) for m in c.diffs] + [0]
    out = []
    for k, d in enumerate(c.dims):
        incoming = ranks[k - 1] if k > 0 else 0
        h = d - ranks[k] - incoming
        if h < 0:
            raise MalformedComplexError(f"negative cohomology in degree {c.min_degree + k}")
        out.append(h)
    return out


def euler_characteristic(dims: Sequence[int], min_degree: int = 0) -> int:
    return sum((-1) ** (min_degree + k) * d for k, d in enumerate(dims))


def truncate(c: GradedComplex, t: int) -> GradedComplex:
    """Keep degrees ``<= t``; the differential out of degree ``t`` becomes zero."""
    keep = t - c.min_degree + 1
    if keep <= 0:
        return GradedComplex((), (), min_degree=c.min_degree)
    keep = min(keep, len(c.dims))
    labels = c.labels[:keep] if c.labels is not None else None
    return GradedComplex(c.dims[:keep], c.diffs[: keep - 1], c.min_degree, labels, check=False)


def _aligned_window(cs: Sequence[GradedComplex]) -> tuple[int, int]:
    nonempty = [c for c in cs if c.dims]
    if not nonempty:
        return 0, -1
    return min(c.min_degree for c in nonempty), max(c.max_degree for c in nonempty)


def direct_sum_complexes(cs: Sequence[GradedComplex]) -> GradedComplex:
    lo, hi = _aligned_window(cs)
    if hi < lo:
        return GradedComplex.zero()
    dims = [sum(c.dim(p) for c in cs) for p in range(lo, hi + 1)]
    diffs = [block_direct_sum([c.diff(p) for c in cs]) for p in range(lo, hi)]
    return GradedComplex(dims, diffs, lo, check=False)


class ComplexMap:
    """Degree-wise maps ``mats[p]: source^p -> target^p`` commuting with the differentials."""

    __slots__ = ("source", "target", "mats")

    def __init__(
        self,
        source: GradedComplex,
        target: GradedComplex,
        mats: Mapping[int, QMatrix],
        check: bool = True,
    ):
        self.source = source
        self.target = target
        lo, hi = _aligned_window([source, target])
        full = {}
        for p in range(lo, hi + 1):
            m = mats.get(p)
            if m is None:
                m = QMatrix.zeros(target.dim(p), source.dim(p))
            if m.shape != (target.dim(p), source.dim(p)):
                raise ChainMapError(
                    f"degree {p} map has shape {m.shape}, expected {(target.dim(p), source.dim(p))}"
                )
            full[p] = m
        self.mats = full
        if check:
            self.check()

    def at(self, p: int) -> QMatrix:
        m = self.mats.get(p)
        return m if m is not None else QMatrix.zeros(self.target.dim(p), self.source.dim(p))

    def check(self) -> None:
        for p in self.mats:
            left = self.target.diff(p) @ self.at(p)
            right = self.at(p + 1) @ self.source.diff(p)
            if left != right:
                raise ChainMapError(f"chain-map square fails in degree {p}")


def is_quasi_isomorphism(f: ComplexMap, degrees: Sequence[int] | None = None) -> bool:
    """Whether ``f`` induces isomorphisms on cohomology.

    For each degree, the image of ``H^p(source)`` in ``H^p(target)`` has
    dimension ``rank[B | f Z] - rank B`` where ``Z`` spans the source
    cocycles and ``B`` the target coboundaries.  ``degrees`` restricts the
    test to a subset of degrees.
    """
    f.check()
    src, tgt = f.source, f.target
    if degrees is None:
        lo, hi = _aligned_window([src, tgt])
        degrees = range(lo, hi + 1)
    for p in degrees:
        z = kernel_basis(src.diff(p))
        b = tgt.diff(p - 1)
        h_src = z.cols - rank(src.diff(p - 1))
        h_tgt = tgt.dim(p) - rank(tgt.diff(p)) - rank(b)
        if h_src != h_tgt:
            return False
        image = rank(hstack([b, f.at(p) @ z], rows=tgt.dim(p))) - rank(b)
        if image != h_src:
            return False
    return True
