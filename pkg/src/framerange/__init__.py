"""Exact range relations for lattice sampling, affine and Gabor frames."""

__version__ = "0.1.0"

from .bands import (
    BandSet,
    RationalBox,
    Relation,
    affine_map,
    boolean_op,
    format_band,
    interval,
    measure,
    normalize,
    parse_band,
    relation,
    union_of,
)
from .classify import Overall, RangeKind, RangeRelation, UnionVerdict, classify_bessel, classify_single, classify_union
from .discrete import (
    DiscreteModel,
    build_model,
    cross_gram,
    frame_bounds_numeric,
    multiplex_roundtrip,
    projections_commutator,
    reconstruct_closed_form,
)
from .generators import (
    DisjointnessVerdict,
    GaborGenerator,
    Status,
    affine_verdict,
    fj_family,
    msf_orthogonality_check,
    periodization_sq,
    quasi_affine_report,
    wh_verdict,
)
from .lattice import (
    Lattice,
    TorusStep,
    frame_bounds_exact,
    integral,
    is_sampling_matrix,
    multiplicity,
    numeric_multiplicity,
)
from .profiles import (
    Characteristic,
    FrazierJawerth,
    MeyerBell,
    PiecewisePoly,
    SpectralProfile,
    dilate_profile,
    eval_profile,
)

SHANNON = union_of((-1, "-1/2"), ("1/2", 1))
