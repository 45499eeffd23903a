"""Detection rates for the chain, triangle and confounder on three nodes.

    python3 scripts/three_node_demo.py --reps 20 --n 5000
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from rmlm.detection import EpsilonConfig, algorithm_mwp, build_detection_matrices
from rmlm.estimation import ThresholdPlan, frechet2_transform
from rmlm.fixtures import chain3, confounder3, triangle3
from rmlm.oracle import TransformSpec, calibrated_c1, population_sigma_T
from rmlm.simulation import sample_rmlm
from rmlm.tropical import ml_matrix, mwp_ground_truth, standardize


@dataclass(frozen=True)
class DemoConfig:
    n: int = 5000
    reps: int = 20
    seed: int = 0
    k1: int = 500
    k2: int = 200
    noise_scale: float = 0.5


MODELS = {
    "chain 3->2->1": chain3,
    "triangle, long path dominant": triangle3,
    "triangle, direct edge dominant": lambda: triangle3(c13=0.95),
    "confounder 1<-3->2": confounder3,
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(DemoConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = DemoConfig(**vars(ap.parse_args(argv)))
    eps, plan = EpsilonConfig(), ThresholdPlan(cfg.k1, cfg.k2)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.reps)
    print(f"{'model':32s} {'MWP(1,2)':>9s} {'sigmaT':>7s} {'P12=1':>6s} {'P21=1':>6s}")
    for name, make in MODELS.items():
        A = standardize(ml_matrix(make()))
        c1 = calibrated_c1(A, 0, 1)
        pop = population_sigma_T(A, TransformSpec(0, 1, c1, 1 / c1))
        hits = np.zeros(2)
        for seq in seeds:
            X = frechet2_transform(sample_rmlm(A, cfg.n, 2, np.random.default_rng(seq), cfg.noise_scale))
            P = algorithm_mwp(build_detection_matrices(X, plan, eps.a), eps)
            hits += [P[0, 1], P[1, 0]]
        rate = hits / cfg.reps
        print(f"{name:32s} {str(bool(mwp_ground_truth(A)[0, 1])):>9s} {pop:7.3f} {rate[0]:6.0%} {rate[1]:6.0%}")


if __name__ == "__main__":
    main()
