"""Random DAGs, noisy max-linear samples and detection metrics."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
import traceback

import numpy as np

from .detection import EpsilonConfig, algorithm_mwp, build_detection_matrices
from .estimation import ThresholdPlan, frechet2_transform
from .graph import EdgeWeightDag
from .tropical import ml_matrix, mwp_ground_truth, standardize

NOISE_DF = {2: 5, 3: 10}
METRICS = ("TPR", "FCCPR", "FDCPR", "FDR", "FDDR", "FDCDR", "FCDDR")


def sample_dag(d: int, p: float, rng: np.random.Generator) -> EdgeWeightDag:
    """Upper-triangular weights: edge k -> i (k > i) with probability p.

    Squared weights are uniform on [0.3, 1.5]; the diagonal is 1.
    """
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    present = np.triu(rng.random((d, d)) < p, k=1)
    w = np.sqrt(rng.uniform(0.3, 1.5, size=(d, d))) * present
    np.fill_diagonal(w, 1.0)
    return EdgeWeightDag(w)


def sample_rmlm(A, n: int, alpha: int, rng: np.random.Generator,
                noise_scale: float = 0.5, abs_noise: bool = False) -> np.ndarray:
    """``A x_max Z + Z_eps`` with ``Z = |t_alpha|`` and scaled t noise."""
    if alpha not in NOISE_DF:
        raise ValueError(f"alpha must be one of {sorted(NOISE_DF)}")
    A = np.asarray(A, dtype=float)
    d, D = A.shape
    Z = np.abs(rng.standard_t(alpha, size=(n, D)))
    X = np.empty((n, d))
    for i in range(d):
        X[:, i] = np.max(Z * A[i], axis=1)
    if noise_scale:
        eps = rng.standard_t(NOISE_DF[alpha], size=(n, d))
        X += noise_scale * (np.abs(eps) if abs_noise else eps)
    return X


def _ratio(num: int, den: int):
    return Fraction(num, den) if den else None


@dataclass
class MetricsRecord:
    """Counts behind the seven rates; a rate is None when its denominator is 0."""

    counts: dict[str, tuple[int, int]]

    def __getattr__(self, name):
        if name in METRICS:
            return _ratio(*self.counts[name])
        raise AttributeError(name)

    def rates(self) -> dict[str, Fraction | None]:
        return {k: _ratio(*self.counts[k]) for k in METRICS}


def pair_sets(A) -> dict[str, np.ndarray]:
    """Ground-truth pair sets as boolean matrices over ordered pairs (i, m)."""
    A = np.asarray(A, dtype=float)
    d = A.shape[0]
    off = ~np.eye(d, dtype=bool)
    support = A > 0
    mwp = mwp_ground_truth(A)
    cp = support & off  # m is an ancestor of i
    dp = ((support.astype(int) @ support.T.astype(int)) > 0) & off
    return {"MWP": mwp, "CP": cp, "DP": dp, "ICP": cp.T.copy(), "OFF": off}


def compute_metrics(P, A) -> MetricsRecord:
    P = np.asarray(P, dtype=bool)
    s = pair_sets(A)
    P = P & s["OFF"]
    mwp, cp, dp, icp = s["MWP"], s["CP"], s["DP"], s["ICP"]
    nmwp = s["OFF"] & ~mwp
    ncp = s["OFF"] & ~cp
    cnt = lambda m: int(np.count_nonzero(m))
    pdp = cnt(P & dp)
    counts = {
        "TPR": (cnt(P & mwp), cnt(mwp)),
        "FCCPR": (cnt(P & nmwp & cp), cnt(nmwp & cp)),
        "FDCPR": (cnt(P & dp & ncp), cnt(dp & ncp)),
        "FDR": (cnt(P & nmwp), cnt(P)),
        "FDDR": (cnt(P & nmwp & dp), pdp),
        "FDCDR": (cnt(P & dp & ncp), pdp),
        "FCDDR": (cnt(P & icp), pdp),
    }
    return MetricsRecord(counts)


@dataclass(frozen=True)
class SimConfig:
    d: int = 20
    p: float = 0.1
    alpha: int = 2
    n: int = 5000
    reps: int = 20
    seed: int = 0
    k1: int = 500
    k2: int = 200
    eps: EpsilonConfig = field(default_factory=EpsilonConfig)
    noise_scale: float = 0.5
    abs_noise: bool = False

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be at least 2")
        if not 0 < self.p < 1:
            raise ValueError("p must lie strictly between 0 and 1")
        if self.alpha not in NOISE_DF:
            raise ValueError(f"alpha must be one of {sorted(NOISE_DF)}")
        if self.reps < 1:
            raise ValueError("reps must be positive")
        ThresholdPlan(self.k1, self.k2).check(self.n)

    @property
    def plan(self) -> ThresholdPlan:
        return ThresholdPlan(self.k1, self.k2)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "SimConfig":
        obj = dict(obj)
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if isinstance(obj.get("eps"), dict):
            obj["eps"] = EpsilonConfig(**obj["eps"])
        return cls(**obj)


def run_replication(cfg: SimConfig, seed_seq: np.random.SeedSequence) -> MetricsRecord:
    rng = np.random.default_rng(seed_seq)
    dag = sample_dag(cfg.d, cfg.p, rng)
    A = standardize(ml_matrix(dag))
    raw = sample_rmlm(A, cfg.n, cfg.alpha, rng, cfg.noise_scale, cfg.abs_noise)
    M = build_detection_matrices(frechet2_transform(raw), cfg.plan, cfg.eps.a)
    return compute_metrics(algorithm_mwp(M, cfg.eps), A)


def _safe_replication(args):
    cfg, seq = args
    try:
        return run_replication(cfg, seq), None
    except Exception:  # recorded per replication, run continues
        return None, traceback.format_exc(limit=3)


def run_experiment(cfg: SimConfig, workers: int = 1) -> list[tuple[MetricsRecord | None, str | None]]:
    """One (record, error) entry per replication, in replication order."""
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.reps)
    jobs = [(cfg, s) for s in seqs]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_safe_replication, jobs))
    return [_safe_replication(j) for j in jobs]


def summarize(records) -> dict[str, dict[str, float | int]]:
    """Quartiles of every metric over replications where it is defined."""
    out = {}
    for name in METRICS:
        vals = [float(getattr(r, name)) for r in records
                if r is not None and getattr(r, name) is not None]
        if vals:
            q = np.quantile(vals, [0.0, 0.25, 0.5, 0.75, 1.0])
            out[name] = {"defined": len(vals), "min": q[0], "q1": q[1],
                         "median": q[2], "q3": q[3], "max": q[4]}
        else:
            out[name] = {"defined": 0, "min": None, "q1": None,
                         "median": None, "q3": None, "max": None}
    return out
