"""aatkit: a symbolic-numeric toolkit for algebraic addition theorems.

Verify and discover addition-theorem polynomials G(phi(u), phi(v),
phi(u+v)) = 0, expand and classify algebroid branches (Puiseux series,
poles, cycles, monodromy), run half-argument and one-element elimination
chains, reduce a relation to its meromorphic invariant by iterated GCDs,
and detect periods from the addition polynomial.
"""

from .aat import (
    AatCertificate,
    ReductionReport,
    algebraic_relation,
    discover_aat,
    koebe_normalize,
    normalize_relation,
    schwarz_reduce,
    verify_aat,
)
from .algebroid import (
    AlgebroidCurve,
    BranchSystem,
    MonodromyPermutation,
    PuiseuxBranch,
    SingularityReport,
    branch_residual,
    exact_branch_element,
    monodromy,
    puiseux_expand,
    puiseux_expand_at_infinity,
    singular_points,
    track_branch,
)
from .elimination import (
    PolyInW,
    discriminant,
    eliminate_chain,
    gcd_in_w,
    resultant,
)
from .functions import FunctionSpec, taylor_of_builtin
from .period import (
    ForsythFit,
    PeriodReport,
    Region,
    RootSet,
    find_roots,
    forsyth_fit,
    verify_period,
    weierstrass_period,
)
from .poly import MultiPoly, poly_eval, poly_gcd, poly_mul, poly_squarefree_content
from .scalars import ExactScalar
from .series import BiSeries, TruncSeries, compose_shift, radius_estimate, rearrange_at, series_arith

__version__ = "0.1.0"
