"""hypjsl: certified stable-length and joint-spectral-radius brackets.

Computes two-sided certified brackets for stable translation lengths and
joint stable lengths of finite sets of isometries of Gromov-hyperbolic
spaces (the hyperbolic plane via 2x2 matrices, and an exact free-group
tree), bridges them to the joint spectral radius of 2x2 matrix sets,
classifies isometries and semigroups, scans a finiteness-property family,
and property-verifies the underlying displacement inequalities.
"""

from ._backend import COMPILED
from .exceptions import BudgetExceededError, ModelMismatchError
from .mat2 import Mat2, ScaledProduct, gelfand_estimate
from .models import (
    DELTA_FREE,
    DELTA_H2,
    EuclidIsometry,
    FreeWord,
    H2Isometry,
    HPoint,
    IsoClass,
    MetricSample,
    basepoint_conjugator,
    fpc_delta,
    free_distance,
    h2_classify,
    h2_displacement,
    h2_distance,
    h2_sample,
    h2_stable_length,
    mobius_apply,
)
from .stable import (
    DEFAULT_BUDGET,
    Bracket,
    IsometrySet,
    MinLengthReport,
    SemigroupVerdict,
    classify_semigroup,
    displacement,
    jsl_bracket,
    min_length_report,
    product_hyperbolicity_bound,
    set_power,
    stable_length_bracket,
)
from .jsr import (
    BridgeReport,
    CyclicClass,
    MatrixSet,
    ScanRow,
    SearchConfig,
    bridge_check,
    family_at,
    finiteness_scan,
    jsr_bounds,
    min_joint_displacement,
)
from .verify import (
    EuclidWitness,
    MatrixInequalityReport,
    SuiteReport,
    continuity_probe,
    euclid_continuity_jump,
    euclidean_counterexample,
    matrix_inequality_report,
    near_commutation_slack,
    pair_inequality_slack,
    run_suite,
    set_square_slack,
    square_inequality_slack,
)

__version__ = "0.1.0"
