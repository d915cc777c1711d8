"""genlab: exact-arithmetic experiments on arithmetic groups.

Submodules
----------
algebra      exact integer/rational matrices and integer polynomials
genericity   density series, annular densities, visible points, F2 words
census       Frobenius-norm census of SL(2,Z) and parabolic counts
walks        recognizing graphs, property R, {L,U} word lengths
quotients    SL(2,Z/m) enumeration and exact walk push-forwards
sieve        irreducibility / cyclotomic / Galois-group certificates
sampler      uniform-by-norm PSL(2,Z) sampling through the hyperbolic plane
zariski      Lie-algebra and mod-p Zariski-density probes
cli          the ``genlab`` command-line tool
"""

from .algebra import (
    GEN_L,
    GEN_S,
    GEN_T,
    GEN_U,
    IntMatrix,
    IntPolynomial,
    RationalMatrix,
    char_poly,
    frobenius_norm_sq,
    mat_mul,
    reduce_mod,
)
# the ball-count helper is genlab.census.census; re-exporting it here would
# shadow the submodule name
from .census import (
    ABCDQuad,
    CensusRecord,
    abcd_transform,
    count_parabolic,
    enumerate_norm_ball,
    pythagorean_parabolic_count,
    reducible_density,
)
from .errors import BudgetExceededError, RejectionRateError
from .genericity import (
    AnnularSeries,
    DensitySeries,
    annular_density,
    density_ratios,
    free_group_abelianization_experiment,
    strict_annular_estimate,
    visible_count,
)
from .quotients import (
    CyclicGroup,
    Distribution,
    FiniteMatrixGroup,
    count_trace,
    crt_split_check,
    exact_walk_distribution,
    group_order,
    onedim_obstruction,
    tv_distance,
)
from .sampler import (
    HPoint,
    ReductionResult,
    gauss_reduce,
    sample_disk_point,
    sample_uniform_norm_ball,
    uniformity_report,
)
from .sieve import (
    CassonCertificate,
    FactorPattern,
    GaloisCertificate,
    casson_certificate,
    certify_irreducible,
    factor_pattern_mod_p,
    galois_full_symmetric_certificate,
    is_cyclotomic_product,
    is_power_substitution,
    iwip_certificate,
)
from .walks import (
    WalkGraph,
    Word,
    build_free_group_graph,
    build_free_monoid_graph,
    build_free_product_graph,
    cf_sum,
    cf_sum_statistics,
    check_property_R,
    sample_walk,
    word_length_LU,
)
from .zariski import (
    ZariskiVerdict,
    is_unipotent,
    lie_closure,
    mod_p_surjective,
    nilpotent_log,
    zariski_verdict,
)

__version__ = "0.1.0"
