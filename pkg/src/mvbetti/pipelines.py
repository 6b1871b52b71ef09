"""The five ways of computing Betti numbers, behind one entry point."""

from __future__ import annotations

from dataclasses import dataclass

from .admissible import AdmissibleDag, CoverOracle, DagStats, StarCoverOracle, build_dag, dag_stats
from .complex import cohomology_dims
from .doublecomplex import total_complex
from .mvrecursion import MComplexStore
from .nerve import NerveData, betti_via_nerve, betti_zero_one
from .simplicial import mv_double_complex, simplicial_cohomology
from .spacefile import SpaceFile
from .validation import check_cover_mode, check_ell, check_pipeline


@dataclass
class PipelineResult:
    pipeline: str
    ell: int
    betti: list[int]
    dag: AdmissibleDag | None = None
    store: MComplexStore | None = None

    @property
    def stats(self) -> DagStats | None:
        return dag_stats(self.dag) if self.dag is not None else None


def _pad(h: list[int], n: int) -> list[int]:
    return (list(h) + [0] * n)[:n]


def cover_oracle(space: SpaceFile, mode: str) -> CoverOracle:
    check_cover_mode(mode)
    if mode == "explicit":
        return space.cover_oracle()
    return StarCoverOracle(minimal=mode == "star")


def oracle_betti(space: SpaceFile, ell: int) -> list[int]:
    return _pad(simplicial_cohomology(space.space), ell + 1)


def run_pipeline(
    space: SpaceFile,
    pipeline: str = "recursive",
    ell: int = 2,
    cover: str = "star",
    check: bool = False,
) -> PipelineResult:
    """Compute ``b_0..b_ell`` of ``space`` with the chosen method.

    ``betti01`` only yields ``b_0`` and ``b_1`` and therefore needs ``ell <= 1``.
    ``check`` validates every double complex and map the recursion builds.
    """
    check_pipeline(pipeline)
    ell = check_ell(ell)
    if pipeline == "oracle":
        return PipelineResult(pipeline, ell, oracle_betti(space, ell))
    oracle = cover_oracle(space, cover)
    if pipeline == "recursive":
        dag = build_dag(space.space, ell, oracle)
        store = MComplexStore(dag, check=check)
        root = store.build()
        return PipelineResult(pipeline, ell, _pad(cohomology_dims(root.tot), ell + 1), dag, store)

    parts = list(oracle(space.space))
    if pipeline == "betti01":
        if ell > 1:
            raise ValueError("the betti01 pipeline computes b_0 and b_1 only; use ell <= 1")
        nd = NerveData([p for _, p in parts], [n for n, _ in parts], space.space)
        return PipelineResult(pipeline, ell, list(betti_zero_one(nd))[: ell + 1])
    if pipeline == "nerve":
        nd = NerveData([p for _, p in parts], [n for n, _ in parts], space.space)
        return PipelineResult(pipeline, ell, betti_via_nerve(nd, ell))
    # pipeline == "mv": terms up to p + q = ell + 1 give H^0..H^ell exactly
    dc = mv_double_complex(space.space, [p for _, p in parts], max_degree=ell + 1)
    return PipelineResult(pipeline, ell, _pad(cohomology_dims(total_complex(dc)), ell + 1))
