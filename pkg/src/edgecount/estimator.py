"""Non-adaptive edge estimation from one up-front query plan.

The plan bundles four blocks: uniform vertex degree probes, random-edge draws
feeding the heavy-mass fraction, many small random-edge batches for the
sparse-regime collision vote, and one large random-edge sample for the
collision-count estimate. Everything after :func:`answer_plan` is
post-processing of the transcript; no query ever depends on an answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .buckets import BucketConfig
from .graph import Graph
from .oracle import (
    PlanProvenance,
    QueryLedger,
    QueryPlan,
    Transcript,
    EmptyGraphError,
    answer_plan,
    deg_block,
    plan_from_blocks,
    rand_edge_block,
)
from .seeding import derive_rng, derive_seed

BRANCH_COLLISION = "collision"
BRANCH_NON_COLLISION = "non_collision"
BRANCH_ZERO_EDGES = "zero_edges"
BRANCH_FAILED = "failed"


class DegenerateEstimateError(RuntimeError):
    """The sampled heavy fraction came out zero, so no ratio estimate exists."""


@dataclass(frozen=True)
class EstimatorParams:
    """Accuracy target, seed, and the tunable sample-size constants.

    ``epsilon`` must lie in ``(0, 0.8]``. ``gamma`` (the bucket growth rate)
    defaults to ``epsilon / 10``. The ``c_*`` constants scale the four sample
    blocks; the defaults are calibrated for the acceptance targets at
    ``n = 10**4, epsilon = 0.25``. ``collision_reps`` > 1 switches the
    collision estimate to the median over that many independent samples.
    """

    epsilon: float
    master_seed: int = 0
    c_s: float = 2.0
    c_t: float = 2.0
    c_f: float = 2.0
    c_r: float = 5.0
    gamma: float | None = None
    collision_reps: int = 1

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon <= 0.8:
            raise ValueError("epsilon must be in (0, 0.8]")
        for name in ("c_s", "c_t", "c_f", "c_r"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.collision_reps < 1:
            raise ValueError("collision_reps must be at least 1")
        if self.gamma is None:
            object.__setattr__(self, "gamma", self.epsilon / 10.0)
        elif self.gamma <= 0:
            raise ValueError("gamma must be positive")

    def degree_sample_size(self, n: int) -> int:
        return math.ceil(self.c_s * math.sqrt(n) * math.log(n) / self.epsilon**2.5)

    def endpoint_sample_size(self, n: int) -> int:
        return math.ceil(self.c_t * math.sqrt(self.epsilon * n) * math.log(n))

    def vote_rounds(self, n: int) -> int:
        return math.ceil(self.c_r * math.log(n))

    def vote_batch_size(self, n: int) -> int:
        return math.ceil(math.sqrt(2 * n))

    def collision_sample_size(self, n: int) -> int:
        return math.ceil(self.c_f * math.sqrt(n) * math.log(n) / self.epsilon)

    def bucket_config(self, n: int) -> BucketConfig:
        return BucketConfig(n, self.gamma)

    def as_dict(self) -> dict[str, object]:
        return {
            "epsilon": self.epsilon,
            "master_seed": self.master_seed,
            "c_s": self.c_s,
            "c_t": self.c_t,
            "c_f": self.c_f,
            "c_r": self.c_r,
            "gamma": self.gamma,
            "collision_reps": self.collision_reps,
        }


@dataclass(frozen=True)
class PlanLayout:
    """Block sizes and positions of the standard sample plan."""

    degree_size: int
    endpoint_size: int
    vote_rounds: int
    vote_batch: int
    collision_reps: int
    collision_size: int

    @property
    def vote_size(self) -> int:
        return self.vote_rounds * self.vote_batch

    @property
    def total(self) -> int:
        return self.degree_size + self.endpoint_size + self.vote_size + self.collision_reps * self.collision_size

    @property
    def degree_slice(self) -> slice:
        return slice(0, self.degree_size)

    @property
    def endpoint_slice(self) -> slice:
        return slice(self.degree_size, self.degree_size + self.endpoint_size)

    @property
    def vote_slice(self) -> slice:
        start = self.degree_size + self.endpoint_size
        return slice(start, start + self.vote_size)

    @property
    def collision_slice(self) -> slice:
        start = self.degree_size + self.endpoint_size + self.vote_size
        return slice(start, self.total)


def plan_layout(n: int, params: EstimatorParams) -> PlanLayout:
    if n < 2:
        raise ValueError("estimation requires n >= 2")
    return PlanLayout(
        degree_size=params.degree_sample_size(n),
        endpoint_size=params.endpoint_sample_size(n),
        vote_rounds=params.vote_rounds(n),
        vote_batch=params.vote_batch_size(n),
        collision_reps=params.collision_reps,
        collision_size=params.collision_sample_size(n),
    )


def build_sample_plan(n: int, params: EstimatorParams) -> QueryPlan:
    """Build the full query plan from ``(n, params)`` alone.

    Degree probes target i.i.d. uniform vertices drawn from the plan stream of
    ``params.master_seed``; every other block is random-edge draws. The result
    is byte-identical across calls with equal inputs and never looks at any
    graph.
    """
    layout = plan_layout(n, params)
    rng = derive_rng(params.master_seed, "plan:degree-vertices")
    vertices = rng.integers(0, n, size=layout.degree_size, dtype=np.int64)
    provenance = PlanProvenance(n=n, epsilon=params.epsilon, seed=params.master_seed)
    return plan_from_blocks(
        provenance,
        deg_block(vertices),
        rand_edge_block(layout.total - layout.degree_size),
    )


@dataclass(frozen=True)
class HeavySet:
    """Bucket indices classified heavy from sampled degrees, plus the evidence."""

    indices: np.ndarray  # sorted bucket indices that cleared the threshold
    bucket_counts: np.ndarray  # sampled-degree tallies per bucket, length t
    sample_size: int  # degree probes issued, including degree-0 results
    threshold: float  # the cleared per-bucket sample-frequency bound

    def heavy_mask(self) -> np.ndarray:
        mask = np.zeros(self.bucket_counts.shape[0], dtype=bool)
        mask[self.indices] = True
        return mask


def classify_heavy(degree_answers: np.ndarray, config: BucketConfig, epsilon: float) -> HeavySet:
    """Mark buckets whose sampled frequency clears ``sqrt(eps / 6n) / t``.

    Degree-0 answers stay in the sample size but join no bucket, matching how
    isolated vertices carry no edge mass.
    """
    degree_answers = np.asarray(degree_answers)
    sample_size = int(degree_answers.shape[0])
    if sample_size == 0:
        raise ValueError("cannot classify from an empty degree sample")
    nonzero = degree_answers >= 1
    counts = np.bincount(config.bucket_indices(degree_answers[nonzero]), minlength=config.t).astype(np.int64)
    threshold = math.sqrt(epsilon / (6.0 * config.n)) / config.t
    indices = np.flatnonzero(counts / sample_size >= threshold)
    return HeavySet(indices=indices, bucket_counts=counts, sample_size=sample_size, threshold=threshold)


def heavy_mass_estimate(heavy: HeavySet, config: BucketConfig) -> float:
    """Scale sampled bucket tallies up to a degree-mass estimate for the heavy part."""
    per_bucket = heavy.bucket_counts[heavy.indices] * config.powers[heavy.indices]
    return float(config.n / heavy.sample_size * per_bucket.sum())


def choose_endpoints(edge_u: np.ndarray, edge_v: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Pick one endpoint of each answered edge with a fair coin.

    This is the degree-proportional vertex draw; the coin randomness is
    post-processing and issues no queries.
    """
    coins = rng.integers(0, 2, size=np.asarray(edge_u).shape[0])
    return np.where(coins == 1, edge_v, edge_u)


def heavy_fraction_estimate(
    endpoints: np.ndarray,
    sampled_vertices: np.ndarray,
    sampled_degrees: np.ndarray,
    heavy: HeavySet,
    config: BucketConfig,
) -> float:
    """Estimate the fraction of edge-endpoint mass sitting in heavy buckets.

    Each chosen endpoint is matched against every copy of itself in the
    degree sample (pair counting with multiplicity), restricted to vertices
    whose bucket is heavy. Rescaling by ``n / |sample|`` and the number of
    endpoint draws makes the estimate unbiased for the true heavy fraction,
    using transcript data only.
    """
    endpoints = np.asarray(endpoints)
    if endpoints.size == 0:
        raise ValueError("heavy fraction needs at least one endpoint draw")
    multiplicity = np.bincount(sampled_vertices, minlength=config.n)
    heavy_vertex = np.zeros(config.n, dtype=bool)
    nonzero = sampled_degrees >= 1
    if nonzero.any():
        bucket_of = config.bucket_indices(sampled_degrees[nonzero])
        heavy_vertex[sampled_vertices[nonzero]] = heavy.heavy_mask()[bucket_of]
    matched_pairs = int((multiplicity[endpoints] * heavy_vertex[endpoints]).sum())
    return float(config.n / heavy.sample_size * matched_pairs / endpoints.shape[0])


def count_collisions(edges: np.ndarray | Iterable[tuple[int, int]]) -> int:
    """Number of index pairs ``i < j`` whose edges are identical."""
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if arr.size == 0:
        return 0
    arr = arr.reshape(-1, 2)
    codes = (np.minimum(arr[:, 0], arr[:, 1]) << np.int64(32)) | np.maximum(arr[:, 0], arr[:, 1])
    _, counts = np.unique(codes, return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def collision_edge_estimate(sample_count: int, collisions: int) -> float:
    """Invert the expected collision count: ``C(sample_count, 2) / collisions``."""
    if collisions < 1:
        raise ValueError("collision estimate undefined without collisions")
    return math.comb(sample_count, 2) / collisions


def collision_majority_vote(edge_u: np.ndarray, edge_v: np.ndarray, rounds: int, batch_size: int) -> int:
    """1 if more than half of the rounds saw any within-batch collision, else 0."""
    edges = np.column_stack((edge_u, edge_v))
    votes = sum(
        1 for j in range(rounds) if count_collisions(edges[j * batch_size : (j + 1) * batch_size]) > 0
    )
    return 1 if 2 * votes > rounds else 0


def _bucket_pipeline(transcript: Transcript, params: EstimatorParams) -> tuple[float, float, HeavySet]:
    n = transcript.plan.provenance.n
    layout = plan_layout(n, params)
    config = params.bucket_config(n)
    degree_slice = layout.degree_slice
    sampled_vertices = transcript.plan.arg_a[degree_slice]
    sampled_degrees = transcript.ans_a[degree_slice]
    heavy = classify_heavy(sampled_degrees, config, params.epsilon)
    mass = heavy_mass_estimate(heavy, config)
    endpoint_slice = layout.endpoint_slice
    endpoints = choose_endpoints(
        transcript.ans_a[endpoint_slice],
        transcript.ans_b[endpoint_slice],
        derive_rng(params.master_seed, "estimate:endpoint-coins"),
    )
    fraction = heavy_fraction_estimate(endpoints, sampled_vertices, sampled_degrees, heavy, config)
    return mass, fraction, heavy


def bucketed_edge_estimate(transcript: Transcript, params: EstimatorParams) -> tuple[float, float, float]:
    """Edge estimate ``mass / (2 * fraction)`` from an answered sample plan.

    Returns ``(estimate, mass, fraction)``; raises
    :class:`DegenerateEstimateError` when the sampled fraction is zero.
    """
    mass, fraction, _ = _bucket_pipeline(transcript, params)
    if fraction == 0.0:
        raise DegenerateEstimateError("sampled heavy fraction is zero")
    return mass / (2.0 * fraction), mass, fraction


def _collision_counts(transcript: Transcript, layout: PlanLayout) -> list[int]:
    sl = layout.collision_slice
    edges = np.column_stack((transcript.ans_a[sl], transcript.ans_b[sl]))
    size = layout.collision_size
    return [count_collisions(edges[j * size : (j + 1) * size]) for j in range(layout.collision_reps)]


@dataclass(frozen=True)
class EstimateReport:
    """One estimation run: the estimate, which branch produced it, and the bill."""

    m_hat: float | None
    branch: str
    r: int
    k: int
    d_tilde_h: float
    p_tilde_h: float
    queries: QueryLedger

    def to_json_dict(self) -> dict[str, object]:
        return {
            "m_hat": self.m_hat,
            "branch": self.branch,
            "r": self.r,
            "k": self.k,
            "d_tilde_h": self.d_tilde_h,
            "p_tilde_h": self.p_tilde_h,
            "queries": self.queries.as_dict(),
        }


def estimate_edges(graph: Graph, params: EstimatorParams) -> EstimateReport:
    """Run the full non-adaptive estimator against ``graph``.

    Branches: ``zero_edges`` when the graph reports no edges; ``collision``
    when the sparse-regime vote fires and collisions were observed, giving
    the inverse-collision estimate; ``non_collision`` for the bucketed ratio
    estimate; ``failed`` when that ratio is degenerate. The ledger in the
    report accounts for every issued query.
    """
    plan = build_sample_plan(graph.n, params)
    layout = plan_layout(graph.n, params)
    ledger = QueryLedger()
    try:
        transcript = answer_plan(graph, plan, derive_seed(params.master_seed, "oracle:answers"), ledger)
    except EmptyGraphError:
        return EstimateReport(
            m_hat=0.0,
            branch=BRANCH_ZERO_EDGES,
            r=0,
            k=0,
            d_tilde_h=0.0,
            p_tilde_h=0.0,
            queries=ledger.snapshot(),
        )

    vote_slice = layout.vote_slice
    k = collision_majority_vote(
        transcript.ans_a[vote_slice], transcript.ans_b[vote_slice], layout.vote_rounds, layout.vote_batch
    )
    rep_counts = _collision_counts(transcript, layout)
    r = sorted(rep_counts)[len(rep_counts) // 2]  # upper median; identity for one rep

    mass, fraction, _ = _bucket_pipeline(transcript, params)
    if r > 0 and k == 1:
        m_hat: float | None = collision_edge_estimate(layout.collision_size, r)
        branch = BRANCH_COLLISION
    elif fraction == 0.0:
        m_hat = None
        branch = BRANCH_FAILED
    else:
        m_hat = mass / (2.0 * fraction)
        branch = BRANCH_NON_COLLISION
    return EstimateReport(
        m_hat=m_hat,
        branch=branch,
        r=int(r),
        k=int(k),
        d_tilde_h=mass,
        p_tilde_h=fraction,
        queries=ledger.snapshot(),
    )
