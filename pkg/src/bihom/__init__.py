"""Exact structure-constant toolkit for BiHom-Jordan superalgebras."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .gradecore import (  # noqa: E402
    Audit,
    GradedMap,
    Report,
    SuperProduct,
    SuperSpace,
    compose,
    direct_sum_map,
    direct_sum_space,
    dual_map,
    eval_product,
    invert,
    koszul_sign,
    suspend_space,
)
from .algebra import (  # noqa: E402
    BiHomJordanSuperalgebra,
    BiHomPreJordanSuperalgebra,
    pre_to_jordan,
    untwist,
    verify_algebra,
    verify_jordan_identity,
    verify_morphism,
    verify_pre_jordan,
    verify_supersymmetry,
    yau_twist,
)
from .representation import (  # noqa: E402
    Bimodule,
    Representation,
    adjoint_rep,
    check_rep_isomorphism,
    check_self_reversing,
    coadjoint_rep,
    coadjoint_semidirect,
    direct_sum_rep,
    dual_rep,
    parity_reverse_rep,
    rep_to_bimodule,
    semidirect_product,
    verify_bimodule,
    verify_representation,
)
from .operators import (  # noqa: E402
    OOperator,
    induce_pre_jordan_even,
    induce_pre_jordan_odd,
    o_op_extend,
    o_op_suspend,
    o_op_via_isomorphism,
    search_o_operators,
    verify_o_operator,
    verify_rota_baxter,
)
