"""Bimodules and representations of BiHom-Jordan superalgebras.

An action J -> gl(V) is stored as a *family*: an object array ``F`` of shape
``(dim J, dim V, dim V)`` where ``F[i]`` is the matrix of the operator
attached to the basis vector ``e_i``.  Operator identities are evaluated on
whole grids of basis tuples and then applied to every basis vector ``u`` of V,
so a Report tuple reads ``(x, y, z, u)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np

from .algebra import BiHomJordanSuperalgebra, TwistPair, axis_parity
from .errors import AlgebraMismatch, DimensionMismatch, ParityError, SingularMap
from .gradecore import (
    Audit,
    GradedMap,
    Report,
    SuperProduct,
    SuperSpace,
    compose,
    direct_sum_map,
    direct_sum_space,
    dual_map,
    frozen,
    invert,
    is_invertible,
    is_zero,
    multiply,
    qarray,
    qzeros,
    sign_array,
    suspend_space,
)


# --------------------------------------------------------------------------
# families of operators


def make_family(J: BiHomJordanSuperalgebra, V: SuperSpace, data, label: str = "family") -> np.ndarray:
    n, m = J.dim, V.dim
    F = qarray(data) if np.size(data) else qzeros((n, m, m))
    if F.shape != (n, m, m):
        raise DimensionMismatch(f"{label} has shape {F.shape}, expected {(n, m, m)}")
    pj, pv = J.space.parities, V.parities
    bad = (pv[None, :, None] + pv[None, None, :] + pj[:, None, None]) % 2 == 1
    if any(v != 0 for v in F[bad]):
        raise ParityError(f"{label} is not an even map J -> gl(V)")
    return frozen(F)


def act(F: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Operators of the elements in batch ``A`` (shape ``(*a, dim J)``) -> ``(*a, m, m)``."""
    return np.tensordot(A, F, axes=([-1], [0]))


def place(O: np.ndarray, axes: tuple[int, ...], ndim: int) -> np.ndarray:
    """Broadcast an operator batch indexed by tuple slots ``axes`` into an ``ndim`` grid."""
    k = len(axes)
    order = sorted(range(k), key=lambda i: axes[i])
    O = np.transpose(O, order + [k, k + 1])
    shape = [1] * ndim
    for pos, a in enumerate(sorted(axes)):
        shape[a] = O.shape[pos]
    return O.reshape(shape + list(O.shape[-2:]))


def chain(*ops) -> np.ndarray:
    return reduce(np.matmul, ops)


def _as_report(name: str, O: np.ndarray) -> Report:
    # O[..., r, u] -> residual rows indexed (..., u)
    return Report.from_residuals(name, np.swapaxes(O, -1, -2))


def _signs(exponent: np.ndarray) -> np.ndarray:
    return sign_array(exponent)[..., None, None]


# --------------------------------------------------------------------------
# types


@dataclass(frozen=True, eq=False)
class Bimodule:
    algebra: BiHomJordanSuperalgebra
    space: SuperSpace
    left: np.ndarray
    right: np.ndarray
    alphaV: GradedMap
    betaV: GradedMap
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "left", make_family(self.algebra, self.space, self.left, "left action"))
        object.__setattr__(self, "right", make_family(self.algebra, self.space, self.right, "right action"))
        TwistPair(self.space, self.alphaV, self.betaV)

    @cached_property
    def twists(self) -> TwistPair:
        return TwistPair(self.space, self.alphaV, self.betaV)

    def left_map(self, i: int) -> GradedMap:
        return GradedMap(self.space, self.space, self.algebra.space.parity(i), self.left[i])

    def right_map(self, i: int) -> GradedMap:
        return GradedMap(self.space, self.space, self.algebra.space.parity(i), self.right[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bimodule):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and np.array_equal(self.left, other.left)
            and np.array_equal(self.right, other.right)
            and self.alphaV == other.alphaV
            and self.betaV == other.betaV
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class Representation:
    algebra: BiHomJordanSuperalgebra
    space: SuperSpace
    rho: np.ndarray
    alphaV: GradedMap
    betaV: GradedMap
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rho", make_family(self.algebra, self.space, self.rho, "rho"))
        TwistPair(self.space, self.alphaV, self.betaV)
        if not (is_invertible(self.alphaV) and is_invertible(self.betaV)):
            raise SingularMap("representation twists must be automorphisms")

    @cached_property
    def twists(self) -> TwistPair:
        return TwistPair(self.space, self.alphaV, self.betaV)

    def rho_map(self, i: int) -> GradedMap:
        return GradedMap(self.space, self.space, self.algebra.space.parity(i), self.rho[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.space.compatible(other.space)
            and np.array_equal(self.rho, other.rho)
            and self.alphaV == other.alphaV
            and self.betaV == other.betaV
        )

    __hash__ = None  # type: ignore[assignment]


# --------------------------------------------------------------------------
# bimodule verification


def _commutation_reports(J, F, tw: TwistPair, label: str) -> list[Report]:
    out = []
    for which, f, g in (("alpha", tw.alpha, J.alpha), ("beta", tw.beta, J.beta)):
        lhs = np.matmul(f.matrix, F)
        rhs = np.matmul(act(F, J.images(*((1, 0) if which == "alpha" else (0, 1)))), f.matrix)
        out.append(_as_report(f"{label}-{which}-commutation", lhs - rhs))
    return out


def _bimodule_terms(B: Bimodule):
    """All operator words of the two triple conditions, as (n, n, n, m, m) grids."""
    J, tw = B.algebra, B.twists
    img = J.images
    P = J.product
    L, R = B.left, B.right
    V = tw.twist
    p = J.space.parities
    px, py, pz = (axis_parity(p, a, 3) for a in range(3))

    def mul(A, C):
        return multiply(P, A, C)

    xy = mul(img(0, 2), img(1, 1))  # beta^2 x . alpha beta y   [x, y]
    a_xy = mul(img(1, 2), img(2, 1))  # alpha beta^2 x . alpha^2 beta y
    alpha_xy = np.tensordot(xy, J.alpha.matrix.T, axes=([-1], [0]))  # alpha(beta^2 x . alpha beta y)
    xyz = mul(xy, img(2, 1))  # [x, y, z]
    zx = mul(img(2, 1), img(3, 0))  # alpha^2 beta z . alpha^3 x   [z, x]

    def lop(A, axes):
        return place(act(L, A), axes, 3)

    def rop(A, axes):
        return place(act(R, A), axes, 3)

    terms = {
        # first condition
        "A1": lop(xyz, (0, 1, 2)) @ V(3, 1).matrix,
        "A2_printed": chain(lop(a_xy, (0, 1)), lop(img(2, 1), (2,))) @ V(3, 0).matrix,
        "A2": chain(lop(alpha_xy, (0, 1)), lop(img(2, 1), (2,))) @ V(3, 0).matrix,
        "A3": chain(rop(zx, (2, 0)), V(1, 0).matrix, lop(img(0, 2), (1,)), V(1, 1).matrix),
        "A4": chain(rop(img(3, 1), (0,)), rop(img(2, 1), (2,)), lop(img(0, 2), (1,)), V(1, 1).matrix),
        "A5": chain(rop(zx, (2, 1)), V(1, 0).matrix, rop(img(1, 1), (0,)), V(0, 2).matrix),
        "A6": chain(rop(img(3, 1), (1,)), rop(img(2, 1), (2,)), rop(img(1, 1), (0,)), V(0, 2).matrix),
    }
    M = V(2, 1).matrix
    terms.update(
        {
            # second condition, in slots (x, y, z)
            "B1": chain(rop(img(3, 1), (0,)), lop(xy, (1, 2)), M),
            "B2_printed": chain(lop(a_xy, (1, 2)), rop(img(3, 0), (0,)), M),
            "B2": chain(lop(alpha_xy, (1, 2)), rop(img(3, 0), (0,)), M),
            "B3": chain(lop(alpha_xy, (2, 0)), rop(img(3, 0), (1,)), M),
            "B4": chain(rop(img(3, 1), (1,)), lop(xy, (2, 0)), M),
            "B5": chain(lop(alpha_xy, (0, 1)), rop(img(3, 0), (2,)), M),
            "B6": chain(rop(img(3, 1), (2,)), lop(xy, (0, 1)), M),
        }
    )
    signs = {
        "zxy": _signs(pz * (px + py)),
        "yz": _signs(py * pz),
        "xyz": _signs(px * (py + pz)),
        "all": _signs(px * py + px * pz + py * pz),
    }
    return terms, signs


def bimodule_residuals(B: Bimodule) -> dict[str, np.ndarray]:
    """Residual operator grids for the two triple conditions.

    ``derived`` forms carry the Koszul signs that the semidirect product forces
    for odd arguments; ``printed`` forms follow the textbook display verbatim.
    """
    t, s = _bimodule_terms(B)
    rhs1 = s["zxy"] * t["A3"] - s["yz"] * t["A4"] - s["xyz"] * t["A6"]
    rhs2 = s["zxy"] * t["B3"] - s["xyz"] * t["B4"] + t["B5"] - s["zxy"] * t["B6"]
    return {
        "derived-1": (t["A1"] - t["A2"]) - (rhs1 + s["all"] * t["A5"]),
        "derived-2": (t["B1"] - s["xyz"] * t["B2"]) - rhs2,
        "printed-1": (t["A1"] - t["A2_printed"]) - (rhs1 + s["zxy"] * t["A5"]),
        "printed-2": (t["B1"] - t["B2_printed"]) - rhs2,
    }


def verify_bimodule(B: Bimodule) -> Audit:
    """Compatibility with the twists plus the two triple conditions.

    The verdict uses the sign-consistent conditions; the verbatim printed
    conditions and the commutation relations expected for multiplicative
    algebras are returned as advisory reports.
    """
    J, tw = B.algebra, B.twists
    if J.dim == 0 or B.space.dim == 0:
        names = ("bimodule-compatibility", "bimodule-identity-1", "bimodule-identity-2")
        return Audit(B.name or "bimodule", tuple(Report(n) for n in names))
    compat = np.matmul(act(B.left, J.images(0, 1)), tw.alpha.matrix) - np.matmul(
        act(B.right, J.images(1, 0)), tw.beta.matrix
    )
    res = bimodule_residuals(B)
    reports = (
        _as_report("bimodule-compatibility", compat),
        _as_report("bimodule-identity-1", res["derived-1"]),
        _as_report("bimodule-identity-2", res["derived-2"]),
    )
    advisory = [
        _as_report("bimodule-identity-1-printed", res["printed-1"]),
        _as_report("bimodule-identity-2-printed", res["printed-2"]),
    ]
    if J.is_multiplicative:
        advisory += _commutation_reports(J, B.left, tw, "bimodule-left")
        advisory += _commutation_reports(J, B.right, tw, "bimodule-right")
    return Audit(B.name or "bimodule", reports, tuple(advisory))


# --------------------------------------------------------------------------
# representation verification


def representation_residuals(R: Representation) -> dict[str, np.ndarray]:
    J, V = R.algebra, R.twists.twist
    img = J.images
    rho = R.rho
    p = J.space.parities
    px, py, pz = (axis_parity(p, a, 3) for a in range(3))

    def op(A, axes):
        return place(act(rho, A), axes, 3)

    def cyc(T):
        # sum over cyclic (x, y, z) of (-1)^{|x||z|} T(x, y, z); T is an (n,n,n,m,m) grid
        return (
            _signs(px * pz) * T
            + _signs(py * px) * np.einsum("yzxab->xyzab", T)
            + _signs(pz * py) * np.einsum("zxyab->xyzab", T)
        )

    a_xy = multiply(J.product, img(1, 2), img(2, 1))
    K = chain(op(a_xy, (0, 1)), op(img(2, 1), (2,))) @ V(3, 0).matrix
    K = np.broadcast_to(K, (J.dim,) * 3 + K.shape[-2:])
    lhs2 = cyc(K)
    xyz = multiply(J.product, multiply(J.product, img(0, 2), img(1, 1)), img(2, 1))
    first = _signs(px * pz) * (op(xyz, (0, 1, 2)) @ V(3, 1).matrix)
    xzy = chain(op(img(2, 2), (0,)), op(img(2, 1), (2,)), op(img(2, 0), (1,)), V(3, -1).matrix)
    yzx = chain(op(img(2, 2), (1,)), op(img(2, 1), (2,)), op(img(2, 0), (0,)), V(3, -1).matrix)
    rhs2 = first + _signs(pz * (px + py)) * xzy + _signs(px * py) * yzx
    rhs2_printed = first + _signs(px * (py + pz)) * xzy + _signs(px * py) * yzx
    yz = multiply(J.product, img(1, 1), img(2, 0))
    Lw = chain(op(img(2, 2), (0,)), op(yz, (1, 2))) @ V(3, 0).matrix
    Lw = np.broadcast_to(Lw, K.shape)
    lhs3 = cyc(Lw)
    return {
        "identity-1": lhs2 - rhs2,
        "identity-2": lhs3 - lhs2,
        "identity-1-printed": lhs2 - rhs2_printed,
    }


def verify_representation(R: Representation) -> Audit:
    """Twist commutation plus the two operator identities on all basis triples.

    In the first identity the middle right-hand term carries the sign
    (-1)^{|z|(|x|+|y|)}, which is what the bimodule conditions reduce to under
    the l/r bridge; the verbatim display with (-1)^{|x|(|y|+|z|)} is kept as an
    advisory report.
    """
    J, tw = R.algebra, R.twists
    reports = []
    if J.dim == 0 or R.space.dim == 0:
        names = ("rep-alpha-commutation", "rep-beta-commutation", "rep-identity-1", "rep-identity-2")
        return Audit(R.name or "representation", tuple(Report(n) for n in names))
    reports += _commutation_reports(J, R.rho, tw, "rep")
    res = representation_residuals(R)
    reports.append(_as_report("rep-identity-1", res["identity-1"]))
    reports.append(_as_report("rep-identity-2", res["identity-2"]))
    advisory = (_as_report("rep-identity-1-printed", res["identity-1-printed"]),)
    return Audit(R.name or "representation", tuple(reports), advisory)


# --------------------------------------------------------------------------
# constructions


def adjoint_rep(J: BiHomJordanSuperalgebra) -> Representation:
    """rho(e_i) = left multiplication by e_i, with the algebra's own twists."""
    if not J.is_regular:
        raise SingularMap("the adjoint representation needs a regular algebra")
    rho = np.transpose(J.product.tensor, (0, 2, 1))
    return Representation(J, J.space, rho, J.alpha, J.beta, name=f"ad({J.name})" if J.name else "ad")


def zero_rep(J: BiHomJordanSuperalgebra, V: SuperSpace, alphaV=None, betaV=None) -> Representation:
    ident = GradedMap.identity(V)
    return Representation(J, V, qzeros((J.dim, V.dim, V.dim)), alphaV or ident, betaV or ident, "zero")


def rep_to_bimodule(R: Representation) -> Bimodule:
    """l = rho and r(x) = rho(beta alpha^{-1} x) alpha_V beta_V^{-1}."""
    J = R.algebra
    if not J.is_regular:
        raise SingularMap("the bridge needs a regular algebra")
    right = np.matmul(act(R.rho, J.images(-1, 1)), R.twists.twist(1, -1).matrix)
    return Bimodule(J, R.space, R.rho, right, R.alphaV, R.betaV, R.name)


def semidirect_product(B: Bimodule) -> BiHomJordanSuperalgebra:
    """Product on J + V with (x+u)(y+v) = xy + l(x)v + (-1)^{|u||y|} r(y)u."""
    J, V = B.algebra, B.space
    n, m = J.dim, V.dim
    consts = dict(J.product.table())
    pj, pv = J.space.parities, V.parities
    for i in range(n):
        for c in range(m):
            for r in range(m):
                lv = B.left[i, r, c]
                if lv:
                    consts[(i, n + c, n + r)] = lv
                rv = B.right[i, r, c]
                if rv:
                    consts[(n + c, i, n + r)] = rv if not (pv[c] and pj[i]) else -rv
    space = direct_sum_space(J.space, V)
    P = SuperProduct(space, space, space, consts)
    name = f"{J.name}+{B.name}" if J.name and B.name else ""
    return BiHomJordanSuperalgebra(P, direct_sum_map(J.alpha, B.alphaV), direct_sum_map(J.beta, B.betaV), name)


def direct_sum_rep(R1: Representation, R2: Representation) -> Representation:
    if R1.algebra is not R2.algebra and not R1.algebra == R2.algebra:
        raise AlgebraMismatch("representations of different algebras")
    J = R1.algebra
    m1, m2 = R1.space.dim, R2.space.dim
    rho = qzeros((J.dim, m1 + m2, m1 + m2))
    rho[:, :m1, :m1] = R1.rho
    rho[:, m1:, m1:] = R2.rho
    name = f"{R1.name}+{R2.name}" if R1.name and R2.name else ""
    return Representation(
        J,
        direct_sum_space(R1.space, R2.space),
        rho,
        direct_sum_map(R1.alphaV, R2.alphaV),
        direct_sum_map(R1.betaV, R2.betaV),
        name,
    )


def dual_rep(R: Representation) -> Representation:
    """rho*(x) = rho~(beta x) o (beta_V^{-2})^*, rho~(y) xi = (-1)^{|xi||y|} xi o rho(y).

    Coordinates: xi o rho(y) is rho(y)^T xi, and the Koszul sign is taken on
    the parity of the input functional xi.
    """
    J = R.algebra
    if not J.is_regular:
        raise SingularMap("the dual representation needs a regular algebra")
    pj, pv = J.space.parities, R.space.parities
    rho_t = np.swapaxes(act(R.rho, J.images(0, 1)), -1, -2)
    koszul = sign_array(np.outer(pj, pv))[:, None, :]  # [i, ., c]
    tilde = rho_t * koszul
    rho_star = np.matmul(tilde, R.twists.twist(0, -2).matrix.T)
    name = f"{R.name}*" if R.name else ""
    return Representation(
        J, R.space, rho_star, dual_map(invert(R.alphaV)), dual_map(invert(R.betaV)), name
    )


def coadjoint_rep(J: BiHomJordanSuperalgebra) -> Representation:
    return dual_rep(adjoint_rep(J))


def coadjoint_semidirect(J: BiHomJordanSuperalgebra) -> BiHomJordanSuperalgebra:
    return semidirect_product(rep_to_bimodule(coadjoint_rep(J)))


def parity_reverse_rep(R: Representation) -> Representation:
    """rho^s(x) = (-1)^{|x|} s rho(x) s^{-1} on sV, twists conjugated by s."""
    sV, s = suspend_space(R.space)
    s_inv = invert(s)
    pj = R.algebra.space.parities
    rho = np.matmul(np.matmul(s.matrix, R.rho), s_inv.matrix) * sign_array(pj)[:, None, None]

    def conj(f: GradedMap) -> GradedMap:
        return compose(s, compose(f, s_inv))

    name = f"{R.name}^s" if R.name else ""
    return Representation(R.algebra, sV, rho, conj(R.alphaV), conj(R.betaV), name)


def check_rep_isomorphism(R1: Representation, R2: Representation, Phi: GradedMap) -> Audit:
    """Intertwining checks for Phi: V1 -> V2.

    For odd Phi the action relation picks up the Koszul sign
    Phi rho1(x) = (-1)^{|Phi||x|} rho2(x) Phi; for even Phi this is the plain rule.
    """
    if not (R1.algebra is R2.algebra or R1.algebra == R2.algebra):
        raise AlgebraMismatch("representations of different algebras")
    if not (Phi.domain.compatible(R1.space) and Phi.codomain.compatible(R2.space)):
        raise DimensionMismatch(f"Phi maps {Phi.domain} -> {Phi.codomain}, need {R1.space} -> {R2.space}")
    if not is_invertible(Phi):
        raise SingularMap("Phi is not invertible")
    F = Phi.matrix
    pj = R1.algebra.space.parities
    reports = [
        _as_report("isomorphism-alpha", (F @ R1.alphaV.matrix - R2.alphaV.matrix @ F)[None]),
        _as_report("isomorphism-beta", (F @ R1.betaV.matrix - R2.betaV.matrix @ F)[None]),
    ]
    sign = sign_array(pj * Phi.degree)[:, None, None]
    action = np.matmul(F, R1.rho) - sign * np.matmul(R2.rho, F)
    reports.append(_as_report("isomorphism-action", action))
    return Audit("isomorphism", tuple(reports))


def check_self_reversing(R: Representation, Phi: GradedMap) -> Audit:
    return check_rep_isomorphism(R, parity_reverse_rep(R), Phi)


def _sum_blocks(R: Representation) -> tuple[SuperSpace, SuperSpace]:
    V = R.space
    if len(V.blocks) != 2:
        raise DimensionMismatch("expected a representation on a two-summand space V1 + V2")
    return V.blocks


def block_swap(R: Representation) -> GradedMap:
    """Even map (u, w) -> (w, u) from V1 + V2 onto the parity reverse sV1 + sV2.

    Meant for R = rho + rho^s, where sV1 = V2 and sV2 = V1 on coordinates.
    """
    V1, V2 = _sum_blocks(R)
    target = suspend_space(R.space)[0]
    k1, k2 = V1.dim, V2.dim
    m = qzeros((k1 + k2, k1 + k2))
    for i in range(k1):
        m[k2 + i, i] = 1
    for j in range(k2):
        m[j, k1 + j] = 1
    return GradedMap(R.space, target, 0, m)


def suspension_swap(R: Representation) -> GradedMap:
    """Odd map (u, sv) -> (su, v), i.e. s + s^{-1}, for R = rho + rho^s."""
    V1, V2 = _sum_blocks(R)
    s1 = suspend_space(V1)[1]
    s2_inv = invert(suspend_space(V1)[1])
    if not s2_inv.domain.compatible(V2):
        raise DimensionMismatch("second summand is not the parity reverse of the first")
    return GradedMap(R.space, suspend_space(R.space)[0], 1, direct_sum_map(s1, s2_inv).matrix)


# --------------------------------------------------------------------------
# pairing cross-check for the dual action


def pairing_crosscheck(R: Representation) -> dict:
    """Compare <rho*(x) xi, u> with <xi, rho(beta^k x) beta_V^{-2} u> for k in {-3, -1}.

    For every k the verdict records whether the two sides agree exactly, agree
    up to the Koszul sign (-1)^{|xi||x|}, or neither.
    """
    D = dual_rep(R)
    J = R.algebra
    pj, pv = J.space.parities, R.space.parities
    lhs = np.swapaxes(D.rho, -1, -2)  # [x, a(xi), b(u)] = <rho*(x) e*_a, e_b>
    koszul = sign_array(np.outer(pj, pv))[:, :, None]
    out = {}
    for k in (-3, -1):
        rhs = np.matmul(act(R.rho, J.images(0, k)), R.twists.twist(0, -2).matrix)  # [x, a, b]
        out[f"beta^{k}"] = {
            "exact": bool(is_zero(lhs - rhs)),
            "up_to_koszul_sign": bool(is_zero(lhs - koszul * rhs)),
        }
    return out
