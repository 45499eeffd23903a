"""Bias of the two-step dependence estimator on the confounder as k2/k1 shrinks.

Pure max-linear samples; the population target uses the calibrated c1.

    python3 scripts/estimator_bias.py --n 100000 --k1 2000 --k2 500 250 100 --reps 10
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from rmlm.estimation import estimate_sigma_T, frechet2_transform, transform_T
from rmlm.fixtures import NAMED
from rmlm.oracle import TransformSpec, calibrated_c1, population_sigma_T
from rmlm.simulation import sample_rmlm
from rmlm.tropical import ml_matrix, standardize


@dataclass(frozen=True)
class BiasConfig:
    model: str = "confounder"
    n: int = 100_000
    k1: int = 2000
    k2: tuple[int, ...] = (500, 250, 100)
    reps: int = 10
    seed: int = 0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default=BiasConfig.model, choices=sorted(NAMED))
    ap.add_argument("--n", type=int, default=BiasConfig.n)
    ap.add_argument("--k1", type=int, default=BiasConfig.k1)
    ap.add_argument("--k2", type=int, nargs="+", default=list(BiasConfig.k2))
    ap.add_argument("--reps", type=int, default=BiasConfig.reps)
    ap.add_argument("--seed", type=int, default=BiasConfig.seed)
    a = ap.parse_args(argv)
    cfg = BiasConfig(a.model, a.n, a.k1, tuple(a.k2), a.reps, a.seed)
    A = standardize(ml_matrix(NAMED[cfg.model]()))
    c1 = calibrated_c1(A, 0, 1)
    target = population_sigma_T(A, TransformSpec(0, 1, c1, 1 / c1))
    rng = np.random.default_rng(cfg.seed)
    errs = {k2: [] for k2 in cfg.k2}
    for _ in range(cfg.reps):
        X = frechet2_transform(sample_rmlm(A, cfg.n, 2, rng, noise_scale=0))[:, :2]
        T = transform_T(X, c1, 1 / c1, cfg.k1)
        for k2 in cfg.k2:
            errs[k2].append(estimate_sigma_T(T, k2) - target)
    print(f"{cfg.model}: population {target:.4f}, n={cfg.n}, k1={cfg.k1}")
    for k2, e in errs.items():
        print(f"  k2={k2:5d}  k2/k1={k2 / cfg.k1:.3f}  mean error {np.mean(e):+.4f}  sd {np.std(e, ddof=1):.4f}")


if __name__ == "__main__":
    main()
