"""Exact linear algebra over the rationals.

Matrices act on column vectors: a map from Q^n to Q^m is an ``m x n``
:class:`QMatrix`, and ``b @ a`` is the composite "first ``a``, then ``b``".
Entries are :class:`fractions.Fraction` values.  Storage is row-sparse
(one ``{column: value}`` dict per row) since every matrix the library
builds is a signed incidence matrix, but the interface is that of a dense
matrix.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exceptions import MalformedComplexError

__all__ = [
    "QMatrix",
    "rank",
    "kernel_basis",
    "image_rank_composition_zero",
    "block_direct_sum",
    "hstack",
    "vstack",
    "assemble",
]

_ZERO = Fraction(0)


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point entries are not accepted; use int or Fraction")
    return Fraction(value)


class QMatrix:
    """Immutable ``rows x cols`` matrix of exact rationals."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        data: list[dict[int, Fraction]] = [{} for _ in range(rows)]
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
                v = _frac(v)
                if v:
                    data[i][j] = v
        self._data = tuple(data)

    @classmethod
    def _from_row_dicts(cls, rows: int, cols: int, data: Sequence[dict[int, Fraction]]) -> "QMatrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._data = tuple(data)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> "QMatrix":
        """Build from a dense list of rows.  ``cols`` is needed only when there are no rows."""
        nrows = len(rows)
        if nrows == 0:
            return cls(0, cols or 0)
        ncols = len(rows[0])
        if cols is not None and cols != ncols:
            raise ValueError("cols does not match row length")
        data = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            data.append({j: f for j, v in enumerate(r) if (f := _frac(v))})
        return cls._from_row_dicts(nrows, ncols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls._from_row_dicts(rows, cols, [{} for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls._from_row_dicts(n, n, [{i: Fraction(1)} for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> list[Fraction]:
        """Row-major dense entry list."""
        out = []
        for row in self._data:
            out.extend(row.get(j, _ZERO) for j in range(self.cols))
        return out

    def row(self, i: int) -> dict[int, Fraction]:
        """Nonzero entries of row ``i`` (a copy)."""
        return dict(self._data[i])

    def items(self) -> Iterable[tuple[int, int, Fraction]]:
        for i, row in enumerate(self._data):
            for j, v in row.items():
                yield i, j, v

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= j < self.cols):
            raise IndexError(key)
        return self._data[i].get(j, _ZERO)

    def to_lists(self) -> list[list[Fraction]]:
        return [[row.get(j, _ZERO) for j in range(self.cols)] for row in self._data]

    def is_zero(self) -> bool:
        return not any(self._data)

    @property
    def T(self) -> "QMatrix":
        data: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for i, row in enumerate(self._data):
            for j, v in row.items():
                data[j][i] = v
        return QMatrix._from_row_dicts(self.cols, self.rows, data)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        odata = other._data
        out = []
        for row in self._data:
            acc: dict[int, Fraction] = {}
            for k, a in row.items():
                for j, b in odata[k].items():
                    acc[j] = acc.get(j, _ZERO) + a * b
            out.append({j: v for j, v in acc.items() if v})
        return QMatrix._from_row_dicts(self.rows, other.cols, out)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        out = []
        for a, b in zip(self._data, other._data):
            acc = dict(a)
            for j, v in b.items():
                s = acc.get(j, _ZERO) + v
                if s:
                    acc[j] = s
                else:
                    acc.pop(j, None)
            out.append(acc)
        return QMatrix._from_row_dicts(self.rows, self.cols, out)

    def __neg__(self) -> "QMatrix":
        return self.scale(-1)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, s) -> "QMatrix":
        s = _frac(s)
        if not s:
            return QMatrix.zeros(self.rows, self.cols)
        return QMatrix._from_row_dicts(
            self.rows, self.cols, [{j: v * s for j, v in r.items()} for r in self._data]
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(r.items())) for r in self._data)))

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            body = [[str(v) for v in r] for r in self.to_lists()]
            return f"QMatrix({body})" if self.rows else f"QMatrix(0x{self.cols})"
        return f"<QMatrix {self.rows}x{self.cols} nnz={self.nnz}>"


def _echelon(m: QMatrix) -> dict[int, dict[int, Fraction]]:
    """Row-reduce ``m``; return ``{pivot column: normalized pivot row}``.

    Each pivot row has a 1 at its pivot column and zeros in every
    earlier pivot column that was present when it was inserted.
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    # Short rows first keeps fill-in low on incidence matrices.
    for row in sorted((r for r in m._data if r), key=len):
        r = dict(row)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                inv = 1 / r[c]
                pivots[c] = {j: v * inv for j, v in r.items()}
                break
            f = r[c]
            for j, v in p.items():
                s = r.get(j, _ZERO) - f * v
                if s:
                    r[j] = s
                else:
                    r.pop(j, None)
    return pivots


def rank(m: QMatrix) -> int:
    """Dimension of the column space of ``m`` (exact)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_echelon(m))


def _rref(m: QMatrix) -> dict[int, dict[int, Fraction]]:
    pivots = _echelon(m)
    # Back-substitution, last pivot first, clears every pivot column above.
    for c in sorted(pivots, reverse=True):
        prow = pivots[c]
        for c2 in pivots:
            if c2 < c:
                r = pivots[c2]
                f = r.get(c)
                if f:
                    for j, v in prow.items():
                        s = r.get(j, _ZERO) - f * v
                        if s:
                            r[j] = s
                        else:
                            r.pop(j, None)
    return pivots


def kernel_basis(m: QMatrix) -> QMatrix:
    """Columns form a basis of ``{v : m v = 0}``, one per free column."""
    pivots = _rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    entries: dict[tuple[int, int], Fraction] = {}
    for k, f in enumerate(free):
        entries[(f, k)] = Fraction(1)
        for c, prow in pivots.items():
            v = prow.get(f)
            if v:
                entries[(c, k)] = -v
    return QMatrix(m.cols, len(free), entries)


def image_rank_composition_zero(a: QMatrix, b: QMatrix) -> bool:
    """True iff ``b @ a`` vanishes, i.e. applying ``a`` then ``b`` is zero.

    ``a`` is the earlier differential and ``b`` the later one, so
    ``b.cols`` must equal ``a.rows``.
    """
    if b.cols != a.rows:
        raise MalformedComplexError(
            f"cannot compose {a.rows}x{a.cols} followed by {b.rows}x{b.cols}"
        )
    return (b @ a).is_zero()


def block_direct_sum(blocks: Sequence[QMatrix]) -> QMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    return assemble(rows, cols, _diagonal_offsets(blocks))


def _diagonal_offsets(blocks):
    r0 = c0 = 0
    for b in blocks:
        yield r0, c0, b
        r0 += b.rows
        c0 += b.cols


def assemble(rows: int, cols: int, placed: Iterable[tuple[int, int, QMatrix]]) -> QMatrix:
    """Sum of blocks placed at ``(row offset, col offset)`` in a ``rows x cols`` zero matrix."""
    data: list[dict[int, Fraction]] = [{} for _ in range(rows)]
    for r0, c0, b in placed:
        if r0 + b.rows > rows or c0 + b.cols > cols:
            raise ValueError(f"block {b.shape} at ({r0}, {c0}) overflows {rows}x{cols}")
        for i, brow in enumerate(b._data):
            if not brow:
                continue
            target = data[r0 + i]
            for j, v in brow.items():
                s = target.get(c0 + j, _ZERO) + v
                if s:
                    target[c0 + j] = s
                else:
                    target.pop(c0 + j, None)
    return QMatrix._from_row_dicts(rows, cols, data)


def hstack(mats: Sequence[QMatrix], rows: int | None = None) -> QMatrix:
    if not mats:
        return QMatrix.zeros(rows or 0, 0)
    nrows = mats[0].rows
    if any(m.rows != nrows for m in mats):
        raise ValueError("hstack row mismatch")
    placed, c0 = [], 0
    for m in mats:
        placed.append((0, c0, m))
        c0 += m.cols
    return assemble(nrows, c0, placed)


def vstack(mats: Sequence[QMatrix], cols: int | None = None) -> QMatrix:
    if not mats:
        return QMatrix.zeros(0, cols or 0)
    ncols = mats[0].cols
    if any(m.cols != ncols for m in mats):
        raise ValueError("vstack column mismatch")
    placed, r0 = [], 0
    for m in mats:
        placed.append((r0, 0, m))
        r0 += m.rows
    return assemble(r0, ncols, placed)
