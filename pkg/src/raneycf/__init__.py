"""Periods of continued fractions under Moebius transformations.

Exact-arithmetic toolkit built around Raney's finite-state transducers:
LR words, doubly balanced matrix classes, a quadratic-surd oracle, the
transducer pipeline for per(h(x)), and the period bound S_n.
"""

from .matrices import (
    IDENTITY,
    J_MAT,
    L_MAT,
    Mat2,
    R_MAT,
    associated,
    content_gcd,
    det,
    enumerate_DB,
    enumerate_LE,
    enumerate_RE,
    in_CB,
    in_D,
    in_DB,
    in_RB,
    inverse_times_det,
    is_LE,
    is_LS,
    is_RE,
    is_RS,
    multiply,
    nu_L,
    nu_R,
    parse_mat2,
    format_mat2,
    transpose,
    xi,
)
from .words import (
    EPSILON,
    L,
    LRWord,
    R,
    conjugates,
    format_word,
    kappa,
    mu,
    parse_word,
    primitive_root,
    rotate,
    sigma,
    sigma_c,
    star,
    tau_kappa,
    transpose_word,
    word_of_matrix,
)
from .surds import (
    PeriodicCF,
    QuadraticSurd,
    apply_mobius,
    cf_from_surd,
    format_cf,
    format_surd,
    parse_cf,
    parse_surd,
    per,
    surd,
    surd_from_cf,
)
from .transducer import (
    ClosedWalk,
    Transducer,
    TransducerEdge,
    build_transducer,
    factorize_to_DB,
    image_period,
    lr_cycle_to_period,
    lr_repetend,
    reduce_to_DB,
    search_max_ratio,
    to_csv,
    to_dot,
    to_json,
    transduce_cycle,
    walk_LE,
)
from .bounds import (
    BoundBreakdown,
    BoundTerm,
    breakdown_to_json,
    check_bound,
    prime_sharp_bound,
    s_n_closed_form,
    s_n_via_transducer,
)

__version__ = "0.1.0"
