"""Exact Z2-graded linear algebra over the rationals.

Everything here is immutable: matrices are numpy object arrays holding
:class:`fractions.Fraction` entries with the write flag cleared, and every
constructor re-validates parity homogeneity.

Basis convention: in a plain :class:`SuperSpace` the even basis vectors come
first.  A direct sum keeps its summands contiguous (summand-major), so its
parity function is read off the summand layout instead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Integral
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DegreeMismatch, DimensionMismatch, ParityError, SingularMap

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def scalar(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts ints, Fractions, numpy integers and strings like ``"-3/4"``.
    Floats are refused: a binary float silently carries a huge denominator.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if m is None:
            raise ValueError(f"not a rational literal: {value!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return Fraction(num, den)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def qarray(data, shape: Sequence[int] | None = None) -> np.ndarray:
    """Fresh writable object array of Fractions built from nested data."""
    raw = np.array(data, dtype=object)
    if shape is not None:
        raw = raw.reshape(shape)
    out = np.empty(raw.shape, dtype=object)
    for idx in np.ndindex(raw.shape):
        out[idx] = scalar(raw[idx])
    return out


def qzeros(shape: Sequence[int] | int) -> np.ndarray:
    return np.full(shape, ZERO, dtype=object)


def qidentity(n: int) -> np.ndarray:
    out = qzeros((n, n))
    for i in range(n):
        out[i, i] = ONE
    return out


def frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def is_zero(a: np.ndarray) -> bool:
    return not np.any(a != 0)


def sign_array(exponent: np.ndarray) -> np.ndarray:
    """(-1)**exponent elementwise, as Python ints in an object array."""
    out = np.where(np.asarray(exponent) % 2 == 0, 1, -1).astype(object)
    return out


def koszul_sign(p: int, q: int) -> Fraction:
    if p not in (0, 1) or q not in (0, 1):
        raise ValueError("parities must be 0 or 1")
    return -ONE if p == 1 and q == 1 else ONE


# --------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class SuperSpace:
    even_dim: int
    odd_dim: int
    # summand layout; empty for a plain (even-first) space
    blocks: tuple["SuperSpace", ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.even_dim < 0 or self.odd_dim < 0:
            raise ValueError("dimensions must be nonnegative")
        if self.blocks:
            if sum(b.even_dim for b in self.blocks) != self.even_dim or sum(
                b.odd_dim for b in self.blocks
            ) != self.odd_dim:
                raise ValueError("block layout does not add up to the declared dimensions")

    @property
    def dim(self) -> int:
        return self.even_dim + self.odd_dim

    @property
    def is_sum(self) -> bool:
        return bool(self.blocks)

    def parity(self, i: int) -> int:
        if not 0 <= i < self.dim:
            raise IndexError(i)
        if not self.blocks:
            return 0 if i < self.even_dim else 1
        for b in self.blocks:
            if i < b.dim:
                return b.parity(i)
            i -= b.dim
        raise AssertionError("unreachable")

    @cached_property
    def parities(self) -> np.ndarray:
        return frozen(np.array([self.parity(i) for i in range(self.dim)], dtype=np.int64))

    def offsets(self) -> list[int]:
        """Start index of every summand (``[0]`` for a plain space)."""
        out, acc = [], 0
        for b in self.blocks or (self,):
            out.append(acc)
            acc += b.dim
        return out

    def compatible(self, other: "SuperSpace") -> bool:
        """Same dimension and same parity at every index."""
        return self.dim == other.dim and bool(np.array_equal(self.parities, other.parities))

    def __str__(self) -> str:
        if self.blocks:
            return " + ".join(str(b) for b in self.blocks)
        return f"({self.even_dim}|{self.odd_dim})"


def direct_sum_space(*spaces: SuperSpace) -> SuperSpace:
    return SuperSpace(
        sum(s.even_dim for s in spaces), sum(s.odd_dim for s in spaces), tuple(spaces)
    )


def _check_compatible(expected: SuperSpace, got: SuperSpace, what: str) -> None:
    if not expected.compatible(got):
        raise DimensionMismatch(f"{what}: expected space {expected}, got {got}")


# --------------------------------------------------------------------------
# maps


@dataclass(frozen=True, eq=False)
class GradedMap:
    """Parity-homogeneous linear map; column ``c`` is the image of basis vector ``c``."""

    domain: SuperSpace
    codomain: SuperSpace
    degree: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.degree not in (0, 1):
            raise ValueError("degree must be 0 or 1")
        m = self.matrix
        if not (isinstance(m, np.ndarray) and m.dtype == object and not m.flags.writeable):
            m = qarray(m) if np.size(m) else qzeros((self.codomain.dim, self.domain.dim))
        if m.shape != (self.codomain.dim, self.domain.dim):
            raise DimensionMismatch(
                f"matrix shape {m.shape} does not fit {self.domain} -> {self.codomain}"
            )
        bad = (self.codomain.parities[:, None] + self.domain.parities[None, :] + self.degree) % 2 == 1
        if np.any(m[bad] != 0):
            r, c = np.argwhere(bad & (m != 0))[0]
            raise ParityError(
                f"entry ({r},{c}) breaks homogeneity of degree {self.degree}"
            )
        object.__setattr__(self, "matrix", frozen(m) if m.flags.writeable else m)

    # constructors -------------------------------------------------------
    @classmethod
    def identity(cls, space: SuperSpace) -> "GradedMap":
        return cls(space, space, 0, frozen(qidentity(space.dim)))

    @classmethod
    def zero(cls, domain: SuperSpace, codomain: SuperSpace, degree: int = 0) -> "GradedMap":
        return cls(domain, codomain, degree, frozen(qzeros((codomain.dim, domain.dim))))

    @classmethod
    def diagonal(cls, space: SuperSpace, entries: Iterable) -> "GradedMap":
        entries = [scalar(e) for e in entries]
        if len(entries) != space.dim:
            raise DimensionMismatch("diagonal length differs from the dimension")
        m = qzeros((space.dim, space.dim))
        for i, e in enumerate(entries):
            m[i, i] = e
        return cls(space, space, 0, frozen(m))

    # behaviour ------------------------------------------------------------
    @property
    def is_endomorphism(self) -> bool:
        return self.domain.compatible(self.codomain)

    def __call__(self, vector) -> np.ndarray:
        v = np.asarray(vector, dtype=object)
        if v.shape[0] != self.domain.dim:
            raise DimensionMismatch("vector length differs from the domain dimension")
        return self.matrix.dot(v) if self.domain.dim else qzeros(self.codomain.dim)

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.domain.compatible(other.domain)
            and self.codomain.compatible(other.codomain)
            and bool(np.array_equal(self.matrix, other.matrix))
        )

    __hash__ = None  # type: ignore[assignment]

    def scaled(self, c) -> "GradedMap":
        return GradedMap(self.domain, self.codomain, self.degree, self.matrix * scalar(c))

    def power(self, k: int) -> "GradedMap":
        """k-th power of an endomorphism; negative k inverts first."""
        if not self.is_endomorphism:
            raise DimensionMismatch("only endomorphisms have powers")
        base = invert(self) if k < 0 else self
        out = GradedMap.identity(self.domain)
        for _ in range(abs(k)):
            out = compose(base, out)
        return out

    def __repr__(self) -> str:
        return f"GradedMap({self.domain} -> {self.codomain}, degree={self.degree})"


def compose(g: GradedMap, f: GradedMap) -> GradedMap:
    """g after f."""
    _check_compatible(g.domain, f.codomain, "compose")
    if f.domain.dim == 0 or g.codomain.dim == 0:
        m = qzeros((g.codomain.dim, f.domain.dim))
    else:
        m = g.matrix.dot(f.matrix)
    return GradedMap(f.domain, g.codomain, (g.degree + f.degree) % 2, frozen(m))


def _gauss_jordan_inverse(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    a = [[m[r, c] for c in range(n)] + [ONE if r == c else ZERO for c in range(n)] for r in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMap("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv_p = 1 / a[col][col]
        a[col] = [x * inv_p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return qarray([row[n:] for row in a], shape=(n, n))


def invert(f: GradedMap) -> GradedMap:
    if f.domain.dim != f.codomain.dim:
        raise SingularMap("non-square map has no inverse")
    if f.domain.dim == 0:
        return GradedMap(f.codomain, f.domain, f.degree, frozen(qzeros((0, 0))))
    return GradedMap(f.codomain, f.domain, f.degree, frozen(_gauss_jordan_inverse(f.matrix)))


def is_invertible(f: GradedMap) -> bool:
    try:
        invert(f)
    except SingularMap:
        return False
    return True


def dual_map(f: GradedMap) -> GradedMap:
    """xi -> xi o f.  Dual bases keep the primal parities, so this is the transpose."""
    return GradedMap(f.codomain, f.domain, f.degree, frozen(f.matrix.T.copy()))


def direct_sum_map(*maps: GradedMap) -> GradedMap:
    degrees = {m.degree for m in maps}
    if len(degrees) != 1:
        raise DegreeMismatch("direct sum of maps with different degrees")
    dom = direct_sum_space(*(m.domain for m in maps))
    cod = direct_sum_space(*(m.codomain for m in maps))
    out = qzeros((cod.dim, dom.dim))
    r = c = 0
    for m in maps:
        out[r : r + m.codomain.dim, c : c + m.domain.dim] = m.matrix
        r += m.codomain.dim
        c += m.domain.dim
    return GradedMap(dom, cod, degrees.pop(), frozen(out))


def suspend_space(V: SuperSpace) -> tuple[SuperSpace, GradedMap]:
    """Parity reverse sV together with the odd bijection s: V -> sV."""
    if V.blocks:
        parts = [suspend_space(b) for b in V.blocks]
        s = direct_sum_map(*(p[1] for p in parts))
        return s.codomain, s
    sV = SuperSpace(V.odd_dim, V.even_dim)
    m = qzeros((V.dim, V.dim))
    for i in range(V.even_dim):
        m[V.odd_dim + i, i] = ONE
    for i in range(V.odd_dim):
        m[i, V.even_dim + i] = ONE
    return sV, GradedMap(V, sV, 1, frozen(m))


def commutator_residual(f: GradedMap, g: GradedMap) -> np.ndarray:
    return compose(f, g).matrix - compose(g, f).matrix


# --------------------------------------------------------------------------
# products


def _normalise_constants(constants) -> dict[tuple[int, int, int], Fraction]:
    items = constants.items() if isinstance(constants, dict) else (
        ((c[0], c[1], c[2]), c[3]) for c in constants
    )
    out: dict[tuple[int, int, int], Fraction] = {}
    for key, value in items:
        key = tuple(int(k) for k in key)
        if key in out:
            raise ValueError(f"duplicate structure constant {key}")
        out[key] = scalar(value)
    return out


@dataclass(frozen=True, eq=False)
class SuperProduct:
    """Even bilinear map ``left x right -> target`` stored sparsely.

    ``constants`` holds ``(i, j, k, c)``: e_i * e_j has coefficient c on e_k.
    Zero coefficients are dropped and the tuple is sorted by ``(i, j, k)``.
    """

    left: SuperSpace
    right: SuperSpace
    target: SuperSpace
    constants: tuple = ()

    def __post_init__(self):
        table = _normalise_constants(self.constants)
        pl, pr, pt = self.left.parities, self.right.parities, self.target.parities
        kept = []
        for (i, j, k), c in sorted(table.items()):
            if not (0 <= i < self.left.dim and 0 <= j < self.right.dim and 0 <= k < self.target.dim):
                raise DimensionMismatch(f"structure constant index {(i, j, k)} out of range")
            if c == 0:
                continue
            if (pl[i] + pr[j]) % 2 != pt[k]:
                raise ParityError(f"structure constant {(i, j, k)} is not even")
            kept.append((i, j, k, c))
        object.__setattr__(self, "constants", tuple(kept))

    @classmethod
    def on(cls, space: SuperSpace, constants=()) -> "SuperProduct":
        return cls(space, space, space, constants)

    @classmethod
    def from_tensor(cls, left, right, target, tensor: np.ndarray) -> "SuperProduct":
        consts = [
            (i, j, k, tensor[i, j, k]) for i, j, k in zip(*np.nonzero(tensor != 0))
        ]
        return cls(left, right, target, consts)

    @property
    def space(self) -> SuperSpace:
        return self.target

    @cached_property
    def tensor(self) -> np.ndarray:
        t = qzeros((self.left.dim, self.right.dim, self.target.dim))
        for i, j, k, c in self.constants:
            t[i, j, k] = c
        return frozen(t)

    def table(self) -> dict[tuple[int, int, int], Fraction]:
        return {(i, j, k): c for i, j, k, c in self.constants}

    def with_constant(self, i: int, j: int, k: int, value) -> "SuperProduct":
        """Copy with one coefficient replaced (used for mutation audits)."""
        table = self.table()
        table[(i, j, k)] = scalar(value)
        return SuperProduct(self.left, self.right, self.target, table)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperProduct):
            return NotImplemented
        return (
            self.left.compatible(other.left)
            and self.right.compatible(other.right)
            and self.target.compatible(other.target)
            and self.constants == other.constants
        )

    __hash__ = None  # type: ignore[assignment]

    def __len__(self) -> int:
        return len(self.constants)


def eval_product(P: SuperProduct, u, v) -> np.ndarray:
    u = np.asarray(u, dtype=object)
    v = np.asarray(v, dtype=object)
    if u.shape != (P.left.dim,) or v.shape != (P.right.dim,):
        raise DimensionMismatch("argument vectors do not match the product spaces")
    out = qzeros(P.target.dim)
    for i, j, k, c in P.constants:
        if u[i] != 0 and v[j] != 0:
            out[k] += c * u[i] * v[j]
    return out


def multiply(P: SuperProduct, U: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Batched product over the outer product of the batch axes.

    ``U`` has shape ``(*a, left.dim)``, ``W`` has shape ``(*b, right.dim)``;
    the result has shape ``(*a, *b, target.dim)``.
    """
    a_shape, b_shape = U.shape[:-1], W.shape[:-1]
    Uf = U.reshape(-1, P.left.dim)
    Wf = W.reshape(-1, P.right.dim)
    out = qzeros((Uf.shape[0], Wf.shape[0], P.target.dim))
    for i, j, k, c in P.constants:
        ui, wj = Uf[:, i], Wf[:, j]
        nzu, nzw = np.nonzero(ui != 0)[0], np.nonzero(wj != 0)[0]
        if nzu.size == 0 or nzw.size == 0:
            continue
        block = np.multiply.outer(ui[nzu] * c, wj[nzw])
        out[np.ix_(nzu, nzw, [k])] += block[:, :, None]
    return out.reshape(*a_shape, *b_shape, P.target.dim)


def multiply_paired(P: SuperProduct, U: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Batched product with a shared batch shape: out[a] = U[a] * W[a]."""
    if U.shape[:-1] != W.shape[:-1]:
        raise DimensionMismatch("paired product needs equal batch shapes")
    shape = U.shape[:-1]
    Uf = U.reshape(-1, P.left.dim)
    Wf = W.reshape(-1, P.right.dim)
    out = qzeros((Uf.shape[0], P.target.dim))
    for i, j, k, c in P.constants:
        out[:, k] += (Uf[:, i] * c) * Wf[:, j]
    return out.reshape(*shape, P.target.dim)


def apply_map(f: GradedMap, X: np.ndarray) -> np.ndarray:
    """Apply ``f`` to every vector along the last axis of ``X``."""
    if X.shape[-1] != f.domain.dim:
        raise DimensionMismatch("batch vectors do not match the map domain")
    if X.size == 0:
        return qzeros(X.shape[:-1] + (f.codomain.dim,))
    return np.tensordot(X, f.matrix, axes=([-1], [1]))


def basis(space: SuperSpace) -> np.ndarray:
    """Rows are the standard basis vectors."""
    return qidentity(space.dim)


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Report:
    """Audit of one identity: the basis tuples whose residual is nonzero."""

    identity_name: str
    violations: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def tuples(self) -> list[tuple[int, ...]]:
        return [v[0] for v in self.violations]

    @classmethod
    def from_residuals(cls, name: str, residual: np.ndarray) -> "Report":
        """``residual`` has shape ``(*tuple_axes, n)``; rows that are nonzero are violations."""
        if residual.size == 0:
            return cls(name)
        nz = np.any(residual != 0, axis=-1)
        found = []
        for idx in zip(*np.nonzero(nz)):
            idx = tuple(int(i) for i in idx)
            found.append((idx, tuple(residual[idx])))
        found.sort(key=lambda v: v[0])
        return cls(name, tuple(found))

    def summary(self) -> str:
        state = "ok" if self.passed else f"{len(self.violations)} violation(s)"
        return f"{self.identity_name}: {state}"


@dataclass(frozen=True)
class Audit:
    """Several reports about one object.

    Only ``reports`` decide :attr:`passed`; ``advisory`` reports are computed
    and serialized but do not count towards the verdict.
    """

    subject: str
    reports: tuple[Report, ...]
    advisory: tuple[Report, ...] = ()

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def __bool__(self) -> bool:
        return self.passed

    def __iter__(self) -> Iterator[Report]:
        return iter(self.reports + self.advisory)

    def __getitem__(self, name: str) -> Report:
        for r in self:
            if r.identity_name == name:
                return r
        raise KeyError(name)

    @property
    def violation_count(self) -> int:
        return sum(len(r.violations) for r in self.reports)
