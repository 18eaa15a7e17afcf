"""q-PAM physical-layer network coding for the two-way relay channel."""

from .channel import (
    GainNormalization,
    ModulationParams,
    SampleBlock,
    async_transmit,
    mu,
    normalize_gains,
    pam_modulate,
    sync_transmit,
)
from .constellation import (
    JointSymbol,
    NeighborReport,
    SuperimposedConstellation,
    build_constellation,
    l_min,
    min_distance_difference,
    neighbor_report,
)
from .curve import (
    characteristic_symbols,
    dmin_curve,
    eval_curve,
    sensitivity_report,
    turning_points,
)
from .detect import bc_recover, bp_detect, md_detect, ml_detect
from .gf import ConfigurationError, PrimeField, bezout, gf_add, gf_inv, gf_mul, gf_neg, gf_sub
from .ncmap import (
    DminResult,
    NcPair,
    cluster_partition,
    clustering_candidates_at_trough,
    clustering_pairs,
    d_min,
    nc_map,
    optimal_ab_bruteforce,
    optimal_ab_closed,
    same_cluster_condition,
    ser_bound,
)
from .presets import reproduce
from .sim import SerEstimate, SimConfig, UnreachableTarget, required_snr, run_ser

__version__ = "0.1.0"
