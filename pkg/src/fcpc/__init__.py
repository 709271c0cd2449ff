"""Function-correcting partition codes: partitions, distance requirements,
minimal D-code search, contractions, bounds and an encoder/verifier."""

from .errors import *  # noqa: F401,F403
from .gf import Field, Word, field_new, hamming_distance, weight, support
from .partitions import (
    ExplicitPartition,
    GroupedWeightPartition,
    Subspace,
    as_explicit,
    coordinate_partition,
    coset_partition,
    from_blocks,
    from_function,
    grouped,
    hwdf_partition,
    is_refinement,
    join,
    join_all,
    join_grouped,
    kernel_of_linear,
    materialize,
    support_partition,
    weight_partition,
)
from .metrics import DistanceMatrix, block_distance, block_distance_matrix, pdm, pdrm, pdrm_grouped
from .pgraph import (
    Clique,
    ConditionFails,
    PartitionGraph,
    coordinate_clique,
    coset_clique,
    find_full_clique,
    is_locally_bounded,
    support_clique,
    weight_clique,
)
from .contraction import (
    Contraction,
    clique_to_contraction,
    coset_contraction,
    dense_contraction,
    mask_contraction,
    verify_contraction,
    weight_contraction,
)
from .dcode import DCode, SearchReport, min_dcode, n_classical, verify_dcode
from .bounds import BoundReport, join_bounds, partition_gains, plotkin_lower, support_bounds, weight_bounds
from .codec import (
    Encoding,
    OptimalityCertificate,
    construction_locally_bounded,
    decode,
    encode_from_dcode,
    optimal_redundancy,
    verify_encoding,
)
from .kernels import BACKEND

__version__ = "0.1.0"
