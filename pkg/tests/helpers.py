"""Shared fixture builders for the test suite."""

from __future__ import annotations

from fractions import Fraction as Fr
from pathlib import Path

from bihom.algebra import BiHomJordanSuperalgebra, yau_twist
from bihom.gradecore import GradedMap, SuperProduct, SuperSpace

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"

# e even; x, y odd
K3_TABLE = {
    (0, 0, 0): 1,
    (0, 1, 1): Fr(1, 2),
    (1, 0, 1): Fr(1, 2),
    (0, 2, 2): Fr(1, 2),
    (2, 0, 2): Fr(1, 2),
    (1, 2, 0): 1,
    (2, 1, 0): -1,
}
E, X, Y = 0, 1, 2
A, B = 0, 1


def fix0(n0: int = 1, n1: int = 2) -> BiHomJordanSuperalgebra:
    return BiHomJordanSuperalgebra.plain(SuperProduct.on(SuperSpace(n0, n1)), "Z")


def k3(table=None) -> BiHomJordanSuperalgebra:
    return BiHomJordanSuperalgebra.plain(SuperProduct.on(SuperSpace(1, 2), table or K3_TABLE), "K3")


def alpha_k3(lam) -> GradedMap:
    lam = Fr(lam)
    return GradedMap.diagonal(SuperSpace(1, 2), [1, lam, 1 / lam])


def k3lm(lam=2, mu=3) -> BiHomJordanSuperalgebra:
    return yau_twist(k3(), alpha_k3(lam), alpha_k3(mu), f"K3[{lam},{mu}]")


def n2(table=None) -> BiHomJordanSuperalgebra:
    return BiHomJordanSuperalgebra.plain(SuperProduct.on(SuperSpace(2, 0), table or {(A, A, B): 1}), "N2")


def vec(*entries):
    return [Fr(e) for e in entries]
