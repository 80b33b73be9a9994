"""Property-based toolkit for constraint-based causal structure learning.

Small exact machinery: mixed graphs and separation, conditional-independence
models, a property/uniqueness calculus with brute-force corresponding
algorithms, PC orientation-rule variants, the sparsest-permutation search,
minimality checkers, and a linear Gaussian simulation harness.
"""

from .graphs import (
    BIDIRECTED,
    DAG,
    ANCESTRAL,
    ANTERIAL,
    MAG,
    DIRECTED,
    UNDIRECTED,
    EnumerationCapError,
    MecKey,
    MixedGraph,
    ancestors,
    enumerate_graphs,
    is_maximal,
    mec_key,
    minimal_collider_paths,
    separated,
    separation_set,
    validate_class,
)
from .ci import (
    CISet,
    Dataset,
    ExplicitOracle,
    FisherZOracle,
    GaussianModel,
    GaussianOracle,
    ci_holds,
    from_graph,
    skeleton_of,
    union_of_markov,
)

__all__ = [
    "BIDIRECTED",
    "DAG",
    "ANCESTRAL",
    "ANTERIAL",
    "MAG",
    "DIRECTED",
    "UNDIRECTED",
    "EnumerationCapError",
    "MecKey",
    "MixedGraph",
    "ancestors",
    "enumerate_graphs",
    "is_maximal",
    "mec_key",
    "minimal_collider_paths",
    "separated",
    "separation_set",
    "validate_class",
    "CISet",
    "Dataset",
    "ExplicitOracle",
    "FisherZOracle",
    "GaussianModel",
    "GaussianOracle",
    "ci_holds",
    "from_graph",
    "skeleton_of",
    "union_of_markov",
]

__version__ = "0.1.0"
