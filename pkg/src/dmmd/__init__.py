"""Discriminative distribution-matching projections for domain adaptation.

Learn a linear projection under which a labeled source domain and an
unlabeled target domain look alike (marginally and class-by-class) while
classes stay separated, then classify the target in that subspace and
iterate on the resulting pseudo labels.

Layout:

- ``stats``: labeled-data container, discrepancy matrices, scatters, and
  the exact-identity residual checks.
- ``laplacians``: graph-style factorizations of the class discrepancy
  terms and the inter-class separation terms.
- ``objectives``: objective assembly (baseline, two trade-off strategies,
  scatter-term ablations) and projection learning.
- ``linalg``: generalized symmetric eigensolver with ridge escalation.
- ``classify``: similarity graphs, harmonic label propagation, 1-NN.
- ``pipeline``: the iterative adaptation loop, ablation suite, grid
  search.
- ``data``: CSV round-trip, normalization, synthetic task generator.
- ``verify``: randomized verification driver over the identity checks.
- ``cli``: command-line entry point (``dmmd``).
"""

from .classify import (
    SimilarityGraph,
    argmax_labels,
    build_knn_graph,
    graph_laplacian,
    isolated_columns,
    one_hot,
    one_nn_classify,
    propagate_labels,
)
from .data import (
    NormStats,
    SynthSpec,
    load_domain_csv,
    load_labels,
    normalize,
    save_domain_csv,
    save_labels,
    synth_shifted_gaussians,
)
from .errors import (
    ClassAbsentError,
    DataFormatError,
    NumericalError,
    UnusableLabelsError,
)
from .laplacians import (
    ClassLaplacianSet,
    InterClassLaplacian,
    build_class_set,
    build_interclass,
    class_set_discrepancy_gap,
    domain_between_laplacian,
    domain_within_laplacian,
    embed_class_laplacian,
    variance_laplacian_star,
    within_laplacian_star,
)
from .linalg import EigResult, solve_generalized_eig
from .objectives import (
    Assembly,
    Projection,
    assemble_ablation,
    assemble_baseline,
    assemble_strategy1,
    assemble_strategy2,
    learn_projection,
)
from .pipeline import (
    AdaptConfig,
    AdaptResult,
    adapt,
    evaluate_accuracy,
    grid_search,
    run_ablation_suite,
)
from .stats import (
    LabeledData,
    MmdMatrix,
    ScatterSet,
    between_scatter_pairwise_residual,
    build_m0,
    build_mc,
    classwise_mmd_scatter_residual,
    implicit_weight,
    scatter_between,
    scatter_decomposition_residual,
    scatter_set,
    scatter_total,
    scatter_within,
)
from .verify import IdentityReport, run_identity_suite

__version__ = "0.1.0"

__all__ = [
    "AdaptConfig",
    "AdaptResult",
    "Assembly",
    "ClassAbsentError",
    "ClassLaplacianSet",
    "DataFormatError",
    "EigResult",
    "IdentityReport",
    "InterClassLaplacian",
    "LabeledData",
    "MmdMatrix",
    "NormStats",
    "NumericalError",
    "Projection",
    "ScatterSet",
    "SimilarityGraph",
    "SynthSpec",
    "UnusableLabelsError",
    "adapt",
    "argmax_labels",
    "assemble_ablation",
    "assemble_baseline",
    "assemble_strategy1",
    "assemble_strategy2",
    "between_scatter_pairwise_residual",
    "build_class_set",
    "build_interclass",
    "build_knn_graph",
    "build_m0",
    "build_mc",
    "class_set_discrepancy_gap",
    "classwise_mmd_scatter_residual",
    "domain_between_laplacian",
    "domain_within_laplacian",
    "embed_class_laplacian",
    "evaluate_accuracy",
    "graph_laplacian",
    "grid_search",
    "implicit_weight",
    "isolated_columns",
    "learn_projection",
    "load_domain_csv",
    "load_labels",
    "normalize",
    "one_hot",
    "one_nn_classify",
    "propagate_labels",
    "run_ablation_suite",
    "run_identity_suite",
    "save_domain_csv",
    "save_labels",
    "scatter_between",
    "scatter_decomposition_residual",
    "scatter_set",
    "scatter_total",
    "scatter_within",
    "solve_generalized_eig",
    "synth_shifted_gaussians",
    "variance_laplacian_star",
    "within_laplacian_star",
]
