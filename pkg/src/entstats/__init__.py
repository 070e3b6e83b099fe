"""entstats: purity statistics of random n-qubit pure states.

Compares the uniform-sphere (Haar) ensemble against flat-modulus phase
ensembles (hypergraph / butson / continuous-phase states) through the
distribution of bipartition purity and its balanced-bipartition average:
exact closed-form cumulants, Monte Carlo estimation, exhaustive
small-system enumeration, and greedy minimum-purity search.
"""

__version__ = "0.1.0"

from .bitcomb import Bipartition, balanced_bipartitions, binom, bit_gather, trinom
from .purity import (
    BACKEND,
    PuritySample,
    coupling_g,
    purity_direct,
    purity_me,
    purity_me_direct,
    purity_rdm,
)
from .search import SearchResult, best_of_sample, greedy_flip_descent, multistart
from .states import (
    EnsembleSpec,
    PhaseWord,
    PureState,
    enumerate_butson,
    fixed_state,
    sample_butson,
    sample_haar,
    sample_hadamard_typical,
)
from .stats import CumulantSummary, Histogram, accumulate, histogram_build, merge, zscore_report

__all__ = [
    "BACKEND",
    "Bipartition",
    "CumulantSummary",
    "EnsembleSpec",
    "Histogram",
    "PhaseWord",
    "PureState",
    "PuritySample",
    "SearchResult",
    "__version__",
    "accumulate",
    "balanced_bipartitions",
    "best_of_sample",
    "binom",
    "bit_gather",
    "coupling_g",
    "enumerate_butson",
    "fixed_state",
    "greedy_flip_descent",
    "histogram_build",
    "merge",
    "multistart",
    "purity_direct",
    "purity_me",
    "purity_me_direct",
    "purity_rdm",
    "sample_butson",
    "sample_haar",
    "sample_hadamard_typical",
    "trinom",
    "zscore_report",
]
