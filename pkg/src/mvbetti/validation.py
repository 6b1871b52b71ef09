"""Argument checks shared by the estimator and the command line."""

from __future__ import annotations

from numbers import Integral
from pathlib import Path

from .simplicial import SimplicialComplex, SubcomplexRef
from .spacefile import SpaceFile, read_space

PIPELINES = ("oracle", "nerve", "betti01", "mv", "recursive")
COVER_MODES = ("star", "full-star", "explicit")


def check_ell(ell) -> int:
    if isinstance(ell, bool) or not isinstance(ell, Integral):
        raise TypeError(f"ell must be an integer, got {type(ell).__name__}")
    if ell < 0:
        raise ValueError(f"ell must be nonnegative, got {ell}")
    return int(ell)


def check_pipeline(name: str) -> str:
    if name not in PIPELINES:
        raise ValueError(f"unknown pipeline {name!r}; expected one of {', '.join(PIPELINES)}")
    return name


def check_cover_mode(mode: str) -> str:
    if mode not in COVER_MODES:
        raise ValueError(f"unknown cover mode {mode!r}; expected one of {', '.join(COVER_MODES)}")
    return mode


def check_space(x) -> SpaceFile:
    """Coerce a path, parsed file, complex or subcomplex into a :class:`SpaceFile`.

    A bare subcomplex becomes the full complex of its own simplices, so
    everything downstream sees ``space`` as the whole ambient complex.
    """
    if isinstance(x, SpaceFile):
        return x
    if isinstance(x, (str, Path)):
        return read_space(x)
    if isinstance(x, SimplicialComplex):
        return SpaceFile(x)
    if isinstance(x, SubcomplexRef):
        if x.member == x.ambient.full.member:
            return SpaceFile(x.ambient)
        amb = x.ambient
        return SpaceFile(SimplicialComplex([amb.vertices[v] for v in x.vertex_ids()],
                                           [[amb.vertices[v] for v in s] for s in x.simplices()]))
    raise TypeError(f"cannot read a space from {type(x).__name__}")
