"""First-quadrant double complexes, their total complexes and E1/E2 page sizes.

A double complex stores horizontal maps ``delta: (p, q) -> (p+1, q)`` and
vertical maps ``d: (p, q) -> (p, q+1)``.  Instances built by this package
hold *commuting* squares (``d delta = delta d``); the sign twist
``(-1)^p`` on the vertical part is applied only when the total complex is
assembled.  ``commuting=False`` marks a complex whose squares already
anticommute, in which case no twist is applied.
"""

from __future__ import annotations

from typing import Mapping

from .complex import ComplexMap, GradedComplex
from .exceptions import ChainMapError, MalformedComplexError
from .linalg import QMatrix, assemble, hstack, kernel_basis, rank

__all__ = [
    "DoubleComplex",
    "DoubleComplexMap",
    "total_complex",
    "tot_layout",
    "total_map",
    "truncate_antidiagonal",
    "e_page_dims",
]

Bidegree = tuple[int, int]


class DoubleComplex:
    __slots__ = ("dims", "horiz", "vert", "commuting", "labels", "_tot")

    def __init__(
        self,
        dims: Mapping[Bidegree, int],
        horiz: Mapping[Bidegree, QMatrix] | None = None,
        vert: Mapping[Bidegree, QMatrix] | None = None,
        commuting: bool = True,
        labels: Mapping[Bidegree, list] | None = None,
        check: bool = True,
    ):
        clean = {}
        for (p, q), n in dims.items():
            if n < 0:
                raise MalformedComplexError(f"negative dimension at {(p, q)}")
            if n and (p < 0 or q < 0):
                raise MalformedComplexError(f"nonzero term at {(p, q)} outside the first quadrant")
            if n:
                clean[(p, q)] = int(n)
        self.dims = clean
        self.commuting = commuting
        self.horiz = self._clean_maps(horiz or {}, (1, 0))
        self.vert = self._clean_maps(vert or {}, (0, 1))
        self.labels = dict(labels) if labels else None
        self._tot = None
        if check:
            self.check()

    def _clean_maps(self, maps, step):
        out = {}
        for (p, q), m in maps.items():
            tgt = (p + step[0], q + step[1])
            if m.shape != (self.dim(*tgt), self.dim(p, q)):
                raise MalformedComplexError(
                    f"map out of {(p, q)} has shape {m.shape}, expected {(self.dim(*tgt), self.dim(p, q))}"
                )
            if m.rows and m.cols and not m.is_zero():
                out[(p, q)] = m
        return out

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0)

    def h(self, p: int, q: int) -> QMatrix:
        """Horizontal map out of ``(p, q)``."""
        m = self.horiz.get((p, q))
        return m if m is not None else QMatrix.zeros(self.dim(p + 1, q), self.dim(p, q))

    def v(self, p: int, q: int) -> QMatrix:
        """Vertical map out of ``(p, q)``."""
        m = self.vert.get((p, q))
        return m if m is not None else QMatrix.zeros(self.dim(p, q + 1), self.dim(p, q))

    @property
    def top_degree(self) -> int:
        return max((p + q for p, q in self.dims), default=-1)

    def check(self) -> None:
        for (p, q) in self.dims:
            if not (self.h(p + 1, q) @ self.h(p, q)).is_zero():
                raise MalformedComplexError(f"delta delta != 0 at {(p, q)}")
            if not (self.v(p, q + 1) @ self.v(p, q)).is_zero():
                raise MalformedComplexError(f"d d != 0 at {(p, q)}")
            via_h = self.v(p + 1, q) @ self.h(p, q)
            via_v = self.h(p, q + 1) @ self.v(p, q)
            ok = via_h == via_v if self.commuting else (via_h + via_v).is_zero()
            if not ok:
                raise MalformedComplexError(f"square at {(p, q)} violates the commutation law")

    def __repr__(self) -> str:
        return f"DoubleComplex({dict(sorted(self.dims.items()))})"


def tot_layout(dc: DoubleComplex, n: int) -> list[tuple[int, int, int, int]]:
    """``(p, q, offset, dim)`` of each summand of ``Tot^n``, ascending in ``p``."""
    out, off = [], 0
    for p in range(0, n + 1):
        d = dc.dim(p, n - p)
        if d:
            out.append((p, n - p, off, d))
            off += d
    return out


def total_complex(dc: DoubleComplex) -> GradedComplex:
    """``Tot^n = (+)_{p+q=n} C^{p,q}`` with ``D = delta + (-1)^p d`` (commuting storage)."""
    if dc._tot is not None:
        return dc._tot
    top = dc.top_degree
    layouts = [tot_layout(dc, n) for n in range(top + 1)]
    dims = [sum(e[3] for e in lay) for lay in layouts]
    diffs = []
    for n in range(top):
        tgt = {p: off for p, _, off, _ in layouts[n + 1]}
        placed = []
        for p, q, off, _ in layouts[n]:
            if (p, q) in dc.horiz and p + 1 in tgt:
                placed.append((tgt[p + 1], off, dc.horiz[(p, q)]))
            if (p, q) in dc.vert and p in tgt:
                m = dc.vert[(p, q)]
                if dc.commuting and p % 2:
                    m = -m
                placed.append((tgt[p], off, m))
        diffs.append(assemble(dims[n + 1], dims[n], placed))
    try:
        tot = GradedComplex(dims, diffs, 0)
    except MalformedComplexError as exc:
        raise MalformedComplexError(f"total complex: {exc}") from exc
    dc._tot = tot
    return tot


class DoubleComplexMap:
    """Bidegree-preserving maps commuting with both differentials."""

    __slots__ = ("source", "target", "mats")

    def __init__(
        self,
        source: DoubleComplex,
        target: DoubleComplex,
        mats: Mapping[Bidegree, QMatrix],
        check: bool = True,
    ):
        self.source = source
        self.target = target
        clean = {}
        for (p, q), m in mats.items():
            if m.shape != (target.dim(p, q), source.dim(p, q)):
                raise ChainMapError(
                    f"map at {(p, q)} has shape {m.shape}, expected {(target.dim(p, q), source.dim(p, q))}"
                )
            if m.rows and m.cols and not m.is_zero():
                clean[(p, q)] = m
        self.mats = clean
        if check:
            self.check()

    def at(self, p: int, q: int) -> QMatrix:
        m = self.mats.get((p, q))
        return m if m is not None else QMatrix.zeros(self.target.dim(p, q), self.source.dim(p, q))

    def check(self) -> None:
        s, t = self.source, self.target
        for (p, q) in set(s.dims) | set(t.dims):
            if t.h(p, q) @ self.at(p, q) != self.at(p + 1, q) @ s.h(p, q):
                raise ChainMapError(f"horizontal square fails at {(p, q)}")
            if t.v(p, q) @ self.at(p, q) != self.at(p, q + 1) @ s.v(p, q):
                raise ChainMapError(f"vertical square fails at {(p, q)}")


def total_map_block(f: DoubleComplexMap, n: int) -> QMatrix:
    """The degree-``n`` component of ``Tot(f)``."""
    src = tot_layout(f.source, n)
    tgt = {p: off for p, _, off, _ in tot_layout(f.target, n)}
    rows = sum(e[3] for e in tot_layout(f.target, n))
    cols = sum(e[3] for e in src)
    placed = [(tgt[p], off, f.mats[(p, q)]) for p, q, off, _ in src if (p, q) in f.mats and p in tgt]
    return assemble(rows, cols, placed)


def total_map(f: DoubleComplexMap) -> ComplexMap:
    src = total_complex(f.source)
    tgt = total_complex(f.target)
    top = max(src.max_degree, tgt.max_degree)
    return ComplexMap(src, tgt, {n: total_map_block(f, n) for n in range(top + 1)})


def truncate_antidiagonal(dc: DoubleComplex, t: int) -> DoubleComplex:
    """Zero every term with ``p + q > t``."""
    keep = {k: n for k, n in dc.dims.items() if k[0] + k[1] <= t}
    horiz = {k: m for k, m in dc.horiz.items() if k[0] + k[1] + 1 <= t}
    vert = {k: m for k, m in dc.vert.items() if k[0] + k[1] + 1 <= t}
    labels = {k: l for k, l in dc.labels.items() if k in keep} if dc.labels else None
    return DoubleComplex(keep, horiz, vert, dc.commuting, labels, check=False)


def _induced_rank(first_in_target: QMatrix, first_out: QMatrix, second: QMatrix) -> int:
    """Rank of the map induced by ``second`` on first-direction cohomology."""
    z = kernel_basis(first_out)
    b = first_in_target
    return rank(hstack([b, second @ z], rows=second.rows)) - rank(b)


def e_page_dims(dc: DoubleComplex, filtration: str = "row", page: int = 1) -> dict[Bidegree, int]:
    """Sizes of the E1 or E2 page.

    ``filtration="row"`` takes vertical cohomology first (E1 = H_d,
    E2 = H_delta H_d); ``"column"`` takes horizontal cohomology first
    (E1 = H_delta, E2 = H_d H_delta).
    """
    if filtration not in ("row", "column"):
        raise ValueError(f"unknown filtration {filtration!r}")
    if page not in (1, 2):
        raise ValueError("only pages 1 and 2 are computed")
    if filtration == "row":
        first, second = dc.v, dc.h
        prev_first = lambda p, q: (p, q - 1)
        nxt, prev = (lambda p, q: (p + 1, q)), (lambda p, q: (p - 1, q))
    else:
        first, second = dc.h, dc.v
        prev_first = lambda p, q: (p - 1, q)
        nxt, prev = (lambda p, q: (p, q + 1)), (lambda p, q: (p, q - 1))

    def e1(p, q):
        return dc.dim(p, q) - rank(first(p, q)) - rank(first(*prev_first(p, q)))

    support = sorted(dc.dims)
    e1_dims = {k: e1(*k) for k in support}
    if page == 1:
        return {k: v for k, v in e1_dims.items() if v}

    def induced(p, q):
        y = nxt(p, q)
        if not dc.dim(p, q) or not dc.dim(*y):
            return 0
        return _induced_rank(first(*prev_first(*y)), first(p, q), second(p, q))

    out = {}
    for k in support:
        val = e1_dims[k] - induced(*k) - induced(*prev(*k))
        if val:
            out[k] = val
    return out
