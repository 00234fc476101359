"""Homogeneous O-operators, Rota-Baxter operators and the induced pre-Jordan structures."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .algebra import BiHomJordanSuperalgebra, BiHomPreJordanSuperalgebra, axis_parity
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    NonCommuting,
    NotSelfReversing,
    OOperatorAxiomsFailed,
    SingularMap,
    WrongParity,
)
from .gradecore import (
    Audit,
    GradedMap,
    Report,
    SuperProduct,
    SuperSpace,
    apply_map,
    compose,
    frozen,
    invert,
    is_zero,
    multiply,
    qarray,
    qzeros,
    scalar,
    sign_array,
    suspend_space,
)
from .representation import (
    Representation,
    act,
    adjoint_rep,
    check_self_reversing,
    direct_sum_rep,
    parity_reverse_rep,
)


def _check_shape(rep: Representation, T: GradedMap) -> None:
    if not (T.domain.compatible(rep.space) and T.codomain.compatible(rep.algebra.space)):
        raise DimensionMismatch(f"T must map {rep.space} -> {rep.algebra.space}")


def _twist_reports(rep: Representation, T: GradedMap) -> tuple[Report, Report]:
    J = rep.algebra
    a = J.alpha.matrix @ T.matrix - T.matrix @ rep.alphaV.matrix
    b = J.beta.matrix @ T.matrix - T.matrix @ rep.betaV.matrix
    # rows indexed by the V basis vector u
    return (
        Report.from_residuals("o-operator-alpha", a.T),
        Report.from_residuals("o-operator-beta", b.T),
    )


@dataclass(frozen=True, eq=False)
class OOperator:
    rep: Representation
    T: GradedMap

    def __post_init__(self):
        _check_shape(self.rep, self.T)
        ra, rb = _twist_reports(self.rep, self.T)
        if not (ra.passed and rb.passed):
            raise OOperatorAxiomsFailed("T does not intertwine the twisting maps")

    @property
    def parity(self) -> int:
        return self.T.degree

    @property
    def algebra(self) -> BiHomJordanSuperalgebra:
        return self.rep.algebra

    def __eq__(self, other) -> bool:
        if not isinstance(other, OOperator):
            return NotImplemented
        return self.rep == other.rep and self.T == other.T

    __hash__ = None  # type: ignore[assignment]


# --------------------------------------------------------------------------
# verification


def o_operator_residual(rep: Representation, T: GradedMap, sign_rule: str = "literal") -> np.ndarray:
    """Residual grid [u, v, k] of the quadratic identity.

    ``sign_rule="literal"`` uses (-1)^{|u|(|v|+|T|)} on the second term,
    ``"symmetric"`` uses (-1)^{(|T|+|u|)(|T|+|v|)}.
    """
    J = rep.algebra
    m = rep.space.dim
    if m == 0 or J.dim == 0:
        return qzeros((m, m, J.dim))
    tw = rep.twists
    TU = frozen(T.matrix.T.copy())  # row u = T(e_u)
    lhs = multiply(J.product, TU, TU)
    term1 = np.swapaxes(act(rep.rho, TU), 1, 2)  # [u, v, r] = rho(T u) v
    TQ = frozen((T.matrix @ tw.twist(-1, 1).matrix).T.copy())  # row v = T(a^-1 b v)
    X = np.matmul(act(rep.rho, TQ), tw.twist(1, -1).matrix)  # [v, r, u]
    term2 = np.transpose(X, (2, 0, 1))
    d = T.degree
    p = rep.space.parities
    pu, pv = axis_parity(p, 0, 2), axis_parity(p, 1, 2)
    s1 = sign_array(d * (d + pu))[..., None]
    if sign_rule == "literal":
        s2 = sign_array(pu * (pv + d))[..., None]
    elif sign_rule == "symmetric":
        s2 = sign_array((d + pu) * (d + pv))[..., None]
    else:
        raise ValueError(sign_rule)
    rhs = apply_map(T, s1 * term1 + s2 * term2)
    return lhs - rhs


def verify_o_operator(rep: Representation, T: GradedMap) -> Audit:
    _check_shape(rep, T)
    ra, rb = _twist_reports(rep, T)
    quad = Report.from_residuals("o-operator-identity", o_operator_residual(rep, T))
    return Audit("o-operator", (ra, rb, quad))


def o_operator_sign_crosscheck(rep: Representation, T: GradedMap) -> dict:
    """Verdicts of the quadratic identity under both sign readings of its second term."""
    lit = is_zero(o_operator_residual(rep, T, "literal"))
    sym = is_zero(o_operator_residual(rep, T, "symmetric"))
    return {"literal": bool(lit), "symmetric": bool(sym), "agree": bool(lit == sym)}


def verify_rota_baxter(J: BiHomJordanSuperalgebra, R: GradedMap) -> Report:
    """R(x).R(y) = (-1)^{|R|(|x|+|R|)} R(R(x).y + x.R(y)) on all basis pairs."""
    if not J.is_regular:
        raise SingularMap("Rota-Baxter checks need a regular algebra")
    if not (R.domain.compatible(J.space) and R.codomain.compatible(J.space)):
        raise DimensionMismatch("R must be an endomorphism of the algebra")
    for f in (J.alpha, J.beta):
        if not is_zero(compose(f, R).matrix - compose(R, f).matrix):
            raise NonCommuting("R does not commute with the twisting maps")
    n = J.dim
    if n == 0:
        return Report("rota-baxter")
    P = J.product
    E = qarray(np.eye(n, dtype=object))
    RE = frozen(R.matrix.T.copy())
    lhs = multiply(P, RE, RE)
    inner = multiply(P, RE, E) + multiply(P, E, RE)
    d = R.degree
    sign = sign_array(d * (axis_parity(J.space.parities, 0, 2) + d))[..., None]
    return Report.from_residuals("rota-baxter", lhs - sign * apply_map(R, inner))


def rota_baxter_crosscheck(J: BiHomJordanSuperalgebra, R: GradedMap) -> dict:
    rb = verify_rota_baxter(J, R).passed
    oo = verify_o_operator(adjoint_rep(J), R).passed
    return {"rota_baxter": bool(rb), "o_operator": bool(oo), "agree": bool(rb == oo)}


def rota_baxter_tensor(J: BiHomJordanSuperalgebra, R: GradedMap) -> np.ndarray:
    """Tensor [x, y, k] of x o_R y = R(x).y (odd when R is odd)."""
    n = J.dim
    if n == 0:
        return qzeros((0, 0, 0))
    E = qarray(np.eye(n, dtype=object))
    return multiply(J.product, frozen(R.matrix.T.copy()), E)


def rota_baxter_product(J: BiHomJordanSuperalgebra, R: GradedMap) -> SuperProduct:
    if R.degree:
        raise WrongParity("R(x).y is an even product only for even R")
    return SuperProduct.from_tensor(J.space, J.space, J.space, rota_baxter_tensor(J, R))


# --------------------------------------------------------------------------
# induced structures


def _require(op: OOperator, parity: int) -> None:
    if op.parity != parity:
        raise WrongParity(f"operator has parity {op.parity}, this construction needs {parity}")
    if not verify_o_operator(op.rep, op.T).passed:
        raise OOperatorAxiomsFailed("operator fails the O-operator identity")


def circ_tensor(op: OOperator) -> np.ndarray:
    """u o v = (-1)^{|T|(|u|+|T|)} rho(T u) v, as a tensor [u, v, k] on V."""
    rep, T = op.rep, op.T
    TU = frozen(T.matrix.T.copy())
    base = np.swapaxes(act(rep.rho, TU), 1, 2)
    d = T.degree
    sign = sign_array(d * (rep.space.parities + d))[:, None, None]
    return sign * base


def induced_product(op: OOperator) -> SuperProduct:
    V = op.rep.space
    return SuperProduct.from_tensor(V, V, V, circ_tensor(op))


def transport_product(tensor: np.ndarray, s: GradedMap) -> np.ndarray:
    """Tensor of (su) * (sv) = s(u o v) on the codomain of the bijection s."""
    s_inv = invert(s).matrix
    U = s_inv  # column a = s^{-1}(e'_a)
    X = np.tensordot(U, tensor, axes=([0], [0]))  # [a, v, k]
    X = np.tensordot(X, U, axes=([1], [0]))  # [a, k, b]
    X = np.transpose(X, (0, 2, 1))  # [a, b, k]
    return np.tensordot(X, s.matrix, axes=([2], [1]))


def induce_pre_jordan_even(op: OOperator) -> BiHomPreJordanSuperalgebra:
    _require(op, 0)
    rep = op.rep
    name = f"pre({rep.name})" if rep.name else ""
    return BiHomPreJordanSuperalgebra(induced_product(op), rep.alphaV, rep.betaV, name)


def induce_pre_jordan_odd(op: OOperator) -> BiHomPreJordanSuperalgebra:
    """Product on sV with su . sv = s(u o v) and twists conjugated by s."""
    _require(op, 1)
    rep = op.rep
    sV, s = suspend_space(rep.space)
    tensor = transport_product(circ_tensor(op), s)
    s_inv = invert(s)
    a = compose(s, compose(rep.alphaV, s_inv))
    b = compose(s, compose(rep.betaV, s_inv))
    name = f"pre(s{rep.name})" if rep.name else ""
    return BiHomPreJordanSuperalgebra(SuperProduct.from_tensor(sV, sV, sV, tensor), a, b, name)


def induce_pre_jordan(op: OOperator) -> BiHomPreJordanSuperalgebra:
    return induce_pre_jordan_odd(op) if op.parity else induce_pre_jordan_even(op)


# --------------------------------------------------------------------------
# suspension, extension, isomorphism transport


def suspend_matrix(rep: Representation, T: GradedMap) -> tuple[Representation, GradedMap]:
    """(rho^s, T^s) with T^s(su) = T(u); works for any candidate T."""
    rep_s = parity_reverse_rep(rep)
    s = suspend_space(rep.space)[1]
    Ts = compose(T, invert(s))
    return rep_s, GradedMap(rep_s.space, T.codomain, Ts.degree, Ts.matrix)


def o_op_suspend(op: OOperator) -> OOperator:
    rep_s, Ts = suspend_matrix(op.rep, op.T)
    return OOperator(rep_s, Ts)


def o_op_extend(op: OOperator) -> OOperator:
    """T~(u, sv) = T(u) on rho + rho^s."""
    rep = op.rep
    total = direct_sum_rep(rep, parity_reverse_rep(rep))
    m = rep.space.dim
    mat = qzeros((rep.algebra.dim, 2 * m))
    mat[:, :m] = op.T.matrix
    return OOperator(total, GradedMap(total.space, rep.algebra.space, op.parity, mat))


def o_op_via_isomorphism(op: OOperator, Phi: GradedMap) -> OOperator:
    """T^ = T^s o Phi for a self-reversing representation with isomorphism Phi."""
    if not check_self_reversing(op.rep, Phi).passed:
        raise NotSelfReversing("Phi is not an isomorphism onto the parity reverse")
    sus = o_op_suspend(op)
    hat = compose(sus.T, GradedMap(op.rep.space, sus.rep.space, Phi.degree, Phi.matrix))
    return OOperator(op.rep, GradedMap(op.rep.space, op.algebra.space, hat.degree, hat.matrix))


# --------------------------------------------------------------------------
# grid search


def free_positions(rep: Representation, parity: int) -> list[tuple[int, int]]:
    pj, pv = rep.algebra.space.parities, rep.space.parities
    n, m = rep.algebra.dim, rep.space.dim
    return [(r, c) for r in range(n) for c in range(m) if (pj[r] - pv[c] - parity) % 2 == 0]


def parse_coeffs(coeffs) -> list:
    vals = sorted({scalar(c) for c in coeffs})
    if not vals:
        raise ValueError("coefficient set must be nonempty")
    return vals


def grid_candidates(rep: Representation, parity: int, coeffs, budget: int = 3**12) -> list[GradedMap]:
    """Every parity-homogeneous matrix with entries in ``coeffs``, lexicographic order."""
    vals = parse_coeffs(coeffs)
    pos = free_positions(rep, parity)
    total = len(vals) ** len(pos)
    if total > budget:
        raise BudgetExceeded(f"{total} candidates exceed the budget of {budget}")
    n, m = rep.algebra.dim, rep.space.dim
    out = []
    for combo in itertools.product(vals, repeat=len(pos)):
        mat = qzeros((n, m))
        for (r, c), v in zip(pos, combo):
            mat[r, c] = v
        out.append(GradedMap(rep.space, rep.algebra.space, parity, mat))
    return out


def _screen_inputs(rep: Representation, parity: int):
    J, tw = rep.algebra, rep.twists
    R = _kernels.residues
    pv = rep.space.parities
    s1 = _kernels.sign_residues(sign_array(parity * (pv + parity)).astype(np.int64))
    s2 = _kernels.sign_residues(
        sign_array(pv[:, None] * (pv[None, :] + parity)).astype(np.int64)
    )
    return (
        R(J.product.tensor),
        R(rep.rho),
        R(J.alpha.matrix),
        R(J.beta.matrix),
        R(rep.alphaV.matrix),
        R(rep.betaV.matrix),
        R(tw.twist(-1, 1).matrix),
        R(tw.twist(1, -1).matrix),
        s1,
        s2,
    )


def _exact_verdicts(rep: Representation, cands: list[GradedMap]) -> list[bool]:
    return [verify_o_operator(rep, T).passed for T in cands]


def grid_verdicts(
    rep: Representation, cands: list[GradedMap], *, jobs: int = 1, backend: str | None = None
) -> list[bool]:
    """Exact pass/fail for each candidate, screening modulo a prime first."""
    if not cands:
        return []
    parity = cands[0].degree
    try:
        inputs = _screen_inputs(rep, parity)
        Ts = np.stack([_kernels.residues(T.matrix) for T in cands])
        maybe = _kernels.screen(Ts, *inputs, which=backend)
    except _kernels.Unscreenable:
        maybe = np.ones(len(cands), dtype=bool)
    verdict = [False] * len(cands)
    idx = [i for i in range(len(cands)) if maybe[i]]
    survivors = [cands[i] for i in idx]
    if jobs > 1 and len(survivors) > 1:
        chunks = [survivors[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_exact_verdicts, [rep] * jobs, chunks))
        exact = [None] * len(survivors)
        for k, part in enumerate(parts):
            exact[k::jobs] = part
    else:
        exact = _exact_verdicts(rep, survivors)
    for i, ok in zip(idx, exact):
        verdict[i] = ok
    return verdict


def search_o_operators(
    rep: Representation,
    parity: int,
    coeffs=(-1, 0, 1),
    *,
    budget: int = 3**12,
    jobs: int = 1,
    backend: str | None = None,
) -> list[OOperator]:
    """All O-operators of the given parity with entries from ``coeffs``.

    Ordered lexicographically on the flattened matrix.
    """
    if parity not in (0, 1):
        raise WrongParity(f"parity must be 0 or 1, got {parity}")
    cands = grid_candidates(rep, parity, coeffs, budget)
    verdicts = grid_verdicts(rep, cands, jobs=jobs, backend=backend)
    found = [OOperator(rep, T) for T, ok in zip(cands, verdicts) if ok]
    found.sort(key=lambda op: tuple(op.T.matrix.ravel()))
    return found
