"""Compare the numba and numpy O-operator screening kernels.

    python3 benchmarks/bench_screen.py [--count 20000] [--chunk 2000] [--repeat 3]

The workload is a batch of random parity-homogeneous candidates with entries
in {-2..2} for the adjoint representation of a 6-dimensional semidirect
product.  Its twists are identities, so every candidate reaches the quadratic
stage of the screen.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from bihom import _kernels as K
from bihom.algebra import BiHomJordanSuperalgebra
from bihom.gradecore import SuperProduct, SuperSpace
from bihom.operators import _screen_inputs, free_positions
from bihom.representation import adjoint_rep, rep_to_bimodule, semidirect_product

K3_TABLE = {(0, 0, 0): 1, (0, 1, 1): "1/2", (1, 0, 1): "1/2", (0, 2, 2): "1/2",
            (2, 0, 2): "1/2", (1, 2, 0): 1, (2, 1, 0): -1}


def workload(count: int, parity: int, seed: int):
    J = BiHomJordanSuperalgebra.plain(SuperProduct.on(SuperSpace(1, 2), K3_TABLE), "K3")
    big = semidirect_product(rep_to_bimodule(adjoint_rep(J)))
    R = adjoint_rep(big)
    rng = np.random.default_rng(seed)
    n, m = R.algebra.dim, R.space.dim
    Ts = np.zeros((count, n, m), dtype=np.int64)
    for r, c in free_positions(R, parity):
        Ts[:, r, c] = rng.integers(-2, 3, size=count) % K.PRIME
    return Ts, _screen_inputs(R, parity)


def timed(fn, Ts, inputs, chunk: int, repeat: int):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = np.concatenate([fn(Ts[k:k + chunk], *inputs) for k in range(0, len(Ts), chunk)])
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20000)
    ap.add_argument("--chunk", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)

    for parity in (0, 1):
        Ts, inputs = workload(args.count, parity, args.seed)
        t_np, mask_np = timed(K.screen_numpy, Ts, inputs, args.chunk, args.repeat)
        line = f"parity {parity}: {args.count} candidates  numpy {t_np:.3f}s"
        if K.numba_available():
            t0 = time.perf_counter()
            K.screen_numba(Ts[:1], *inputs)  # compile or load from cache
            warm = time.perf_counter() - t0
            t_nb, mask_nb = timed(K.screen_numba, Ts, inputs, args.chunk, args.repeat)
            same = bool(np.array_equal(mask_np, mask_nb))
            line += f"  numba {t_nb:.3f}s (warm-up {warm:.2f}s)  speedup {t_np / t_nb:.1f}x  agree={same}"
        else:
            line += "  numba unavailable"
        print(line + f"  survivors={int(mask_np.sum())}")


if __name__ == "__main__":
    main()
