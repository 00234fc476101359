"""BiHom-Jordan and BiHom-pre-Jordan superalgebras given by structure constants.

Verifiers evaluate each identity on every tuple of basis vectors; by
multilinearity that is equivalent to the identity on all homogeneous
elements.  Residuals are computed for the whole tuple grid at once (batched
contractions over object arrays) and every nonzero one is reported; nothing
short-circuits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DimensionMismatch,
    NonCommuting,
    NotAMorphism,
    ParityError,
    PreJordanAxiomsFailed,
    SingularMap,
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
    is_invertible,
    is_zero,
    multiply,
    qidentity,
    qzeros,
    sign_array,
)


def axis_parity(p: np.ndarray, axis: int, ndim: int) -> np.ndarray:
    """Parity vector reshaped to vary along ``axis`` of an ``ndim`` grid."""
    shape = [1] * ndim
    shape[axis] = p.shape[0]
    return p.reshape(shape)


def _check_endomorphism(space: SuperSpace, f: GradedMap, label: str) -> None:
    if not (f.domain.compatible(space) and f.codomain.compatible(space)):
        raise DimensionMismatch(f"{label} is not an endomorphism of {space}")
    if f.degree != 0:
        raise ParityError(f"{label} must be even")


class _Twisted:
    """Shared machinery for a space carrying two commuting even maps."""

    space: SuperSpace
    alpha: GradedMap
    beta: GradedMap

    def _validate_twists(self) -> None:
        _check_endomorphism(self.space, self.alpha, "alpha")
        _check_endomorphism(self.space, self.beta, "beta")
        if not is_zero(compose(self.alpha, self.beta).matrix - compose(self.beta, self.alpha).matrix):
            raise NonCommuting("alpha and beta do not commute")

    @cached_property
    def _powers(self) -> dict:
        return {}

    @cached_property
    def _inverses(self) -> tuple[GradedMap, GradedMap]:
        return invert(self.alpha), invert(self.beta)

    def twist(self, a: int, b: int) -> GradedMap:
        """alpha**a beta**b, memoised; negative exponents need regularity."""
        key = (a, b)
        cache = self._powers
        if key not in cache:
            if a < 0 or b < 0:
                ai, bi = self._inverses
            fa = self.alpha if a >= 0 else ai
            fb = self.beta if b >= 0 else bi
            out = GradedMap.identity(self.space)
            for _ in range(abs(a)):
                out = compose(fa, out)
            for _ in range(abs(b)):
                out = compose(fb, out)
            cache[key] = out
        return cache[key]

    def images(self, a: int, b: int) -> np.ndarray:
        """Row x holds alpha**a beta**b (e_x)."""
        return frozen(self.twist(a, b).matrix.T.copy())

    @property
    def is_regular(self) -> bool:
        return is_invertible(self.alpha) and is_invertible(self.beta)

    @property
    def has_identity_twists(self) -> bool:
        ident = GradedMap.identity(self.space)
        return self.alpha == ident and self.beta == ident


@dataclass(frozen=True, eq=False)
class TwistPair(_Twisted):
    """Two commuting even endomorphisms of a space (e.g. alpha_V, beta_V)."""

    space: SuperSpace
    alpha: GradedMap
    beta: GradedMap

    def __post_init__(self):
        self._validate_twists()


@dataclass(frozen=True, eq=False)
class BiHomJordanSuperalgebra(_Twisted):
    product: SuperProduct
    alpha: GradedMap
    beta: GradedMap
    name: str = ""

    def __post_init__(self):
        P = self.product
        if not (P.left.compatible(P.target) and P.right.compatible(P.target)):
            raise DimensionMismatch("product must map J x J -> J")
        self._validate_twists()

    @classmethod
    def plain(cls, product: SuperProduct, name: str = "") -> "BiHomJordanSuperalgebra":
        ident = GradedMap.identity(product.space)
        return cls(product, ident, ident, name)

    @property
    def space(self) -> SuperSpace:
        return self.product.space

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def is_multiplicative(self) -> bool:
        return verify_morphism(self, self.alpha).passed and verify_morphism(self, self.beta).passed

    def mul(self, u, v) -> np.ndarray:
        return multiply(self.product, np.asarray(u, dtype=object), np.asarray(v, dtype=object))

    def with_product(self, product: SuperProduct) -> "BiHomJordanSuperalgebra":
        return BiHomJordanSuperalgebra(product, self.alpha, self.beta, self.name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiHomJordanSuperalgebra):
            return NotImplemented
        return self.product == other.product and self.alpha == other.alpha and self.beta == other.beta

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class BiHomPreJordanSuperalgebra(_Twisted):
    circ: SuperProduct
    alpha: GradedMap
    beta: GradedMap
    name: str = ""

    def __post_init__(self):
        P = self.circ
        if not (P.left.compatible(P.target) and P.right.compatible(P.target)):
            raise DimensionMismatch("circ must map J x J -> J")
        self._validate_twists()

    @property
    def space(self) -> SuperSpace:
        return self.circ.space

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiHomPreJordanSuperalgebra):
            return NotImplemented
        return self.circ == other.circ and self.alpha == other.alpha and self.beta == other.beta

    __hash__ = None  # type: ignore[assignment]


# --------------------------------------------------------------------------
# products of basis images


def associator(P: SuperProduct, alpha: GradedMap, beta: GradedMap, A, B, C) -> np.ndarray:
    """(a.b).beta(c) - alpha(a).(b.c) over the outer product of the batches."""
    AB = multiply(P, A, B)
    left = multiply(P, AB, apply_map(beta, C))
    right = multiply(P, apply_map(alpha, A), multiply(P, B, C))
    return left - right


def verify_supersymmetry(J: BiHomJordanSuperalgebra) -> Report:
    p = J.space.parities
    lhs = multiply(J.product, J.images(0, 1), J.images(1, 0))  # beta(e_i).alpha(e_j)
    sign = sign_array(np.outer(p, p))[:, :, None]
    residual = lhs - sign * np.swapaxes(lhs, 0, 1)
    return Report.from_residuals("bihom-supersymmetry", residual)


def jordan_residuals(J: BiHomJordanSuperalgebra) -> np.ndarray:
    """Residual tensor indexed by (x, y, z, t, k) for the BiHom-Jordan super-identity.

    The cyclic sum runs over the slots (x, y, t) with the three sign prefactors
    (-1)^{|t|(|x|+|z|)}, (-1)^{|x|(|y|+|z|)}, (-1)^{|y|(|t|+|z|)}.
    """
    P, alpha, beta = J.product, J.alpha, J.beta
    n = J.dim
    if n == 0:
        return qzeros((0, 0, 0, 0, 0))
    first = multiply(P, J.images(0, 2), J.images(1, 1))  # beta^2 x . alpha beta y
    F = associator(P, alpha, beta, first, J.images(2, 1), J.images(3, 0))
    p = J.space.parities
    px, py, pz, pt = (axis_parity(p, a, 4) for a in range(4))
    s1 = sign_array(pt * (px + pz))[..., None]
    s2 = sign_array(px * (py + pz))[..., None]
    s3 = sign_array(py * (pt + pz))[..., None]
    return (
        s1 * F
        + s2 * np.einsum("ytzxk->xyztk", F)
        + s3 * np.einsum("txzyk->xyztk", F)
    )


def verify_jordan_identity(J: BiHomJordanSuperalgebra) -> Report:
    return Report.from_residuals("bihom-jordan-super-identity", jordan_residuals(J))


def verify_algebra(J: BiHomJordanSuperalgebra) -> Audit:
    return Audit(J.name or "algebra", (verify_supersymmetry(J), verify_jordan_identity(J)))


def _morphism_report(P: SuperProduct, f: GradedMap, name: str) -> Report:
    n = P.space.dim
    E = qidentity(n)
    lhs = apply_map(f, multiply(P, E, E))
    fE = frozen(f.matrix.T.copy())
    rhs = multiply(P, fE, fE)
    return Report.from_residuals(name, lhs - rhs)


def verify_morphism(J, f: GradedMap, name: str = "morphism") -> Report:
    """f(e_i . e_j) - f(e_i) . f(e_j) for all basis pairs.

    ``J`` may be a BiHom-Jordan or BiHom-pre-Jordan superalgebra (then the
    product checked is its ``circ``).
    """
    P = J.product if isinstance(J, BiHomJordanSuperalgebra) else J.circ
    _check_endomorphism(P.space, f, name)
    return _morphism_report(P, f, name)


# --------------------------------------------------------------------------
# twists


def twist_product(P: SuperProduct, a: GradedMap, b: GradedMap) -> SuperProduct:
    """x .' y = a(x) . b(y)."""
    n = P.space.dim
    tensor = multiply(P, frozen(a.matrix.T.copy()), frozen(b.matrix.T.copy())) if n else qzeros((0, 0, 0))
    return SuperProduct.from_tensor(P.left, P.right, P.target, tensor)


def yau_twist(J0: BiHomJordanSuperalgebra, a: GradedMap, b: GradedMap, name: str = "") -> BiHomJordanSuperalgebra:
    """Twist a Jordan superalgebra (identity twists) by two commuting even morphisms.

    The result carries the product a(x).b(y) and the twisting maps (a, b).
    """
    if not J0.has_identity_twists:
        raise ValueError("yau_twist expects a Jordan superalgebra with alpha = beta = id")
    _check_endomorphism(J0.space, a, "a")
    _check_endomorphism(J0.space, b, "b")
    if not is_zero(compose(a, b).matrix - compose(b, a).matrix):
        raise NonCommuting("twisting maps do not commute")
    for label, f in (("a", a), ("b", b)):
        if not verify_morphism(J0, f).passed:
            raise NotAMorphism(f"{label} is not a morphism of the product")
    return BiHomJordanSuperalgebra(twist_product(J0.product, a, b), a, b, name)


def untwist(J: BiHomJordanSuperalgebra, s: int = 0, t: int = 0) -> tuple[BiHomJordanSuperalgebra, Audit]:
    """x .' y = alpha^{s-1} beta^t (x) . alpha^s beta^{t-1} (y), with identity twists.

    Returns the plain algebra together with its verification audit; the
    construction itself never assumes the result is Jordan.
    """
    if not J.is_regular:
        raise SingularMap("untwisting needs invertible alpha and beta")
    if not J.is_multiplicative:
        raise NotAMorphism("untwisting needs a multiplicative algebra")
    P = twist_product(J.product, J.twist(s - 1, t), J.twist(s, t - 1))
    out = BiHomJordanSuperalgebra.plain(P, name=f"{J.name}-untwist({s},{t})" if J.name else "")
    return out, verify_algebra(out)


# --------------------------------------------------------------------------
# pre-Jordan


def star_product(Pj: BiHomPreJordanSuperalgebra) -> SuperProduct:
    """x * y = x o y + (-1)^{|x||y|} alpha^{-1}beta(y) o alpha beta^{-1}(x)."""
    circ = Pj.circ
    n = Pj.space.dim
    if n == 0:
        return circ
    E = qidentity(n)
    p = Pj.space.parities
    direct = multiply(circ, E, E)
    swapped = multiply(circ, Pj.images(-1, 1), Pj.images(1, -1))  # [y, x]
    tensor = direct + sign_array(np.outer(p, p))[:, :, None] * np.swapaxes(swapped, 0, 1)
    return SuperProduct.from_tensor(circ.left, circ.right, circ.target, tensor)


def _pre_jordan_terms(Pj: BiHomPreJordanSuperalgebra, star: SuperProduct):
    o = Pj.circ
    img = Pj.images
    p = Pj.space.parities
    px, py, pz = (axis_parity(p, a, 4) for a in range(3))

    def cyc(T, s_xz):
        # sum over cyclic (x,y,z) of (-1)^{|x||z|} T(x,y,z,t)
        return (
            s_xz * T
            + sign_array(py * px)[..., None] * np.einsum("yzxtk->xyztk", T)
            + sign_array(pz * py)[..., None] * np.einsum("zxytk->xyztk", T)
        )

    s_xz = sign_array(px * pz)[..., None]

    # K(x,y,z,t) = (ab2 x * a2b y) o (a2b z o a3 t)
    xy = multiply(star, img(1, 2), img(2, 1))
    zt = multiply(o, img(2, 1), img(3, 0))
    K = multiply(o, xy, zt)
    lhs2 = cyc(K, s_xz)

    first = multiply(o, multiply(star, multiply(star, img(0, 2), img(1, 1)), img(2, 1)), img(3, 1))
    # a2b2 x o (a2b z o (a2 y o a3b^{-1} t)) built as [x, z, y, t] then reordered
    inner = multiply(o, img(2, 0), img(3, -1))  # [y, t]
    mid = multiply(o, img(2, 1), inner)  # [z, y, t]
    nest = multiply(o, img(2, 2), mid)  # [x, z, y, t]
    nest_xyzt = np.einsum("xzytk->xyztk", nest)
    second = sign_array(px * (py + pz))[..., None] * nest_xyzt
    third = sign_array(px * py)[..., None] * np.einsum("yzxtk->xyztk", nest)
    rhs2 = s_xz * first + second + third

    # second identity: sum cyc (-1)^{|x||z|} a2b2 x o ((ab y * a2 z) o a3 t)
    yz = multiply(star, img(1, 1), img(2, 0))  # [y, z]
    yzt = multiply(o, yz, img(3, 0))  # [y, z, t]
    L = multiply(o, img(2, 2), yzt)  # [x, y, z, t]
    lhs3 = cyc(L, s_xz)
    return lhs2, rhs2, lhs3, lhs2


def verify_pre_jordan(Pj: BiHomPreJordanSuperalgebra) -> Audit:
    """Morphism conditions for alpha and beta plus both quadruple identities.

    The star product is re-derived from ``circ``; no external star is accepted.
    """
    if not Pj.is_regular:
        raise SingularMap("pre-Jordan twists must be invertible")
    reports = [
        verify_morphism(Pj, Pj.alpha, "pre-jordan-alpha-morphism"),
        verify_morphism(Pj, Pj.beta, "pre-jordan-beta-morphism"),
    ]
    if Pj.space.dim == 0:
        reports += [Report("pre-jordan-identity-1"), Report("pre-jordan-identity-2")]
        return Audit(Pj.name or "pre-jordan", tuple(reports))
    star = star_product(Pj)
    lhs2, rhs2, lhs3, rhs3 = _pre_jordan_terms(Pj, star)
    reports.append(Report.from_residuals("pre-jordan-identity-1", lhs2 - rhs2))
    reports.append(Report.from_residuals("pre-jordan-identity-2", lhs3 - rhs3))
    return Audit(Pj.name or "pre-jordan", tuple(reports))


def pre_to_jordan(Pj: BiHomPreJordanSuperalgebra, *, check: bool = True) -> BiHomJordanSuperalgebra:
    """Associated BiHom-Jordan superalgebra (same space and twists, star product)."""
    if check:
        audit = verify_pre_jordan(Pj)
        if not audit.passed:
            failed = [r.identity_name for r in audit.reports if not r.passed]
            raise PreJordanAxiomsFailed(f"pre-Jordan axioms fail: {', '.join(failed)}")
    elif not Pj.is_regular:
        raise SingularMap("pre-Jordan twists must be invertible")
    name = f"{Pj.name}-assoc" if Pj.name else ""
    return BiHomJordanSuperalgebra(star_product(Pj), Pj.alpha, Pj.beta, name)
