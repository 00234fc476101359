"""Modular screening kernels for O-operator grid search.

Every candidate T is reduced modulo a small prime and tested against the
twist-commutation conditions and the quadratic O-operator identity.  A nonzero
residual mod p certifies failure exactly (as long as no denominator of the
inputs vanishes mod p); candidates that survive are re-verified with exact
rationals by the caller.

Two interchangeable backends exist.  ``BIHOM_NUMBA=0`` forces the numpy
path; otherwise numba is used when it imports.
"""

from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

PRIME = 32003  # p**2 < 2**30: thousands of residue products fit in int64 before reducing


class Unscreenable(ArithmeticError):
    """A denominator is divisible by the prime; screening would be unsound."""


def to_residue(value, p: int = PRIME) -> int:
    q = Fraction(value)
    if q.denominator % p == 0:
        raise Unscreenable(str(q))
    return (q.numerator % p) * pow(q.denominator, -1, p) % p


def residues(a, p: int = PRIME) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    flat = [to_residue(v, p) for v in a.ravel()]
    return np.array(flat, dtype=np.int64).reshape(a.shape)


def sign_residues(sign: np.ndarray, p: int = PRIME) -> np.ndarray:
    return np.where(np.asarray(sign, dtype=np.int64) < 0, p - 1, 1).astype(np.int64)


# --------------------------------------------------------------------------
# numpy backend


def screen_numpy(Ts, C, rho, A, B, AV, BV, Q, W, s1, s2, p: int = PRIME) -> np.ndarray:
    """Boolean mask over candidates; False means the candidate certainly fails."""
    Ts = np.asarray(Ts, dtype=np.int64)
    if Ts.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    lin_a = (np.einsum("rk,tkc->trc", A, Ts) - np.einsum("trk,kc->trc", Ts, AV)) % p
    lin_b = (np.einsum("rk,tkc->trc", B, Ts) - np.einsum("trk,kc->trc", Ts, BV)) % p
    ok = ~(lin_a.any(axis=(1, 2)) | lin_b.any(axis=(1, 2)))

    X = np.einsum("tiu,ijk->tujk", Ts, C) % p
    lhs = np.einsum("tujk,tjv->tuvk", X, Ts) % p
    RT = np.einsum("tiu,irc->turc", Ts, rho) % p
    term1 = np.swapaxes(RT, 2, 3)  # [t, u, v, r]
    TQ = np.einsum("tiw,wv->tiv", Ts, Q) % p
    RQ = np.einsum("tiv,irc->tvrc", TQ, rho) % p
    RQW = np.einsum("tvrc,cu->tvru", RQ, W) % p
    term2 = np.transpose(RQW, (0, 3, 1, 2))  # [t, u, v, r]
    w = (s1[None, :, None, None] * term1 + s2[None, :, :, None] * term2) % p
    rhs = np.einsum("tkr,tuvr->tuvk", Ts, w) % p
    ok &= ~((lhs - rhs) % p).any(axis=(1, 2, 3))
    return ok


# --------------------------------------------------------------------------
# numba backend

_numba_screen = None


def _build_numba():
    from numba import njit

    @njit(cache=True, nogil=True)
    def kernel(Ts, C, rho, A, B, AV, BV, Q, W, s1, s2, p):
        N, n, m = Ts.shape
        out = np.ones(N, dtype=np.bool_)
        RT = np.zeros((m, m, m), dtype=np.int64)
        RQW = np.zeros((m, m, m), dtype=np.int64)
        tmp = np.zeros((m, m), dtype=np.int64)
        TQ = np.zeros((n, m), dtype=np.int64)
        w = np.zeros(m, dtype=np.int64)
        for t in range(N):
            T = Ts[t]
            ok = True
            for r in range(n):
                for c in range(m):
                    a = 0
                    b = 0
                    for k in range(n):
                        a += A[r, k] * T[k, c]
                        b += B[r, k] * T[k, c]
                    for k in range(m):
                        a -= T[r, k] * AV[k, c]
                        b -= T[r, k] * BV[k, c]
                    if a % p != 0 or b % p != 0:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                out[t] = False
                continue
            # rho(T e_u) for every u
            for u in range(m):
                for r in range(m):
                    for c in range(m):
                        acc = 0
                        for i in range(n):
                            acc += T[i, u] * rho[i, r, c]
                        RT[u, r, c] = acc % p
            for i in range(n):
                for v in range(m):
                    acc = 0
                    for k in range(m):
                        acc += T[i, k] * Q[k, v]
                    TQ[i, v] = acc % p
            # rho(T Q e_v) W for every v
            for v in range(m):
                for r in range(m):
                    for c in range(m):
                        acc = 0
                        for i in range(n):
                            acc += TQ[i, v] * rho[i, r, c]
                        tmp[r, c] = acc % p
                for r in range(m):
                    for u in range(m):
                        acc = 0
                        for c in range(m):
                            acc += tmp[r, c] * W[c, u]
                        RQW[v, r, u] = acc % p
            for u in range(m):
                if not ok:
                    break
                for v in range(m):
                    for r in range(m):
                        w[r] = (s1[u] * RT[u, r, v] + s2[u, v] * RQW[v, r, u]) % p
                    for k in range(n):
                        lhs = 0
                        for i in range(n):
                            if T[i, u] == 0:
                                continue
                            tiu = T[i, u]
                            for j in range(n):
                                lhs += (tiu * T[j, v] % p) * C[i, j, k]
                            lhs %= p
                        rhs = 0
                        for r in range(m):
                            rhs += T[k, r] * w[r]
                        if lhs != rhs % p:
                            ok = False
                            break
                    if not ok:
                        break
            out[t] = ok
        return out

    return kernel


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def backend() -> str:
    flag = os.environ.get("BIHOM_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "no", "off"):
        return "numpy"
    return "numba" if numba_available() else "numpy"


def screen_numba(Ts, C, rho, A, B, AV, BV, Q, W, s1, s2, p: int = PRIME) -> np.ndarray:
    global _numba_screen
    if _numba_screen is None:
        _numba_screen = _build_numba()
    Ts = np.ascontiguousarray(Ts, dtype=np.int64)
    return _numba_screen(Ts, C, rho, A, B, AV, BV, Q, W, s1, s2, p)


def screen(*args, which: str | None = None, **kw) -> np.ndarray:
    which = which or backend()
    if which == "numba":
        return screen_numba(*args, **kw)
    return screen_numpy(*args, **kw)
