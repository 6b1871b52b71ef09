"""Betti numbers of finite simplicial complexes through recursive
Mayer-Vietoris double complexes, with exact rational linear algebra and a
brute-force simplicial cohomology oracle."""

from .admissible import (
    AdmissibleDag,
    ExplicitCoverOracle,
    StarCoverOracle,
    build_dag,
    dag_stats,
    unique_ancestor,
)
from .complex import ComplexMap, GradedComplex, cohomology_dims, is_quasi_isomorphism
from .doublecomplex import DoubleComplex, e_page_dims, total_complex
from .exceptions import (
    BuildOrderError,
    ChainMapError,
    CoverError,
    DagConstructionError,
    IncompleteNerveError,
    MalformedComplexError,
    MVBettiError,
    ParseError,
    PropertyViolationError,
)
from .linalg import QMatrix, kernel_basis, rank
from .mvrecursion import MComplexStore, betti, verify_store
from .nerve import NerveData, betti_via_nerve, betti_zero_one
from .pipelines import run_pipeline
from .simplicial import (
    SimplicialComplex,
    SubcomplexRef,
    minimal_star_cover,
    mv_double_complex,
    simplicial_cohomology,
    star_cover,
)
from .spacefile import bundled_examples, load_example, parse_space, read_space

__version__ = "0.1.0"


def __getattr__(name):
    # scikit-learn is slow to import; load the estimator only when asked for
    if name == "BettiEstimator":
        from .estimator import BettiEstimator

        return BettiEstimator
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "AdmissibleDag",
    "BettiEstimator",
    "BuildOrderError",
    "ChainMapError",
    "ComplexMap",
    "CoverError",
    "DagConstructionError",
    "DoubleComplex",
    "ExplicitCoverOracle",
    "GradedComplex",
    "IncompleteNerveError",
    "MComplexStore",
    "MVBettiError",
    "MalformedComplexError",
    "NerveData",
    "ParseError",
    "PropertyViolationError",
    "QMatrix",
    "SimplicialComplex",
    "StarCoverOracle",
    "SubcomplexRef",
    "betti",
    "betti_via_nerve",
    "betti_zero_one",
    "build_dag",
    "bundled_examples",
    "cohomology_dims",
    "dag_stats",
    "e_page_dims",
    "is_quasi_isomorphism",
    "kernel_basis",
    "load_example",
    "minimal_star_cover",
    "mv_double_complex",
    "parse_space",
    "rank",
    "read_space",
    "run_pipeline",
    "simplicial_cohomology",
    "star_cover",
    "total_complex",
    "unique_ancestor",
    "verify_store",
]
