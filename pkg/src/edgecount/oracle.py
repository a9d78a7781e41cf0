"""Metered graph access through declared query plans.

A :class:`QueryPlan` fixes every query up front; :func:`answer_plan` resolves
the whole batch in one call. Because no answer exists before the last query is
declared, nothing downstream can steer later queries with earlier answers.
Four query kinds are supported: degree lookup, uniform random edge (with
replacement), k-th neighbor in ascending order, and pair membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence, Union

import numpy as np

from .graph import Graph

DEG, RAND_EDGE, NBR, PAIR = 0, 1, 2, 3
_KIND_FIELDS = ("deg", "rand_edge", "nbr", "pair")


class EmptyGraphError(RuntimeError):
    """Random-edge queries are unanswerable on a graph with no edges."""


@dataclass(frozen=True)
class Deg:
    v: int


@dataclass(frozen=True)
class RandEdge:
    pass


@dataclass(frozen=True)
class Nbr:
    v: int
    i: int  # 1-based rank among v's neighbors in ascending vertex order


@dataclass(frozen=True)
class Pair:
    u: int
    v: int


QuerySpec = Union[Deg, RandEdge, Nbr, Pair]

_RAND_EDGE = RandEdge()


def _format_query(kind: int, a: int, b: int) -> str:
    if kind == DEG:
        return f"Deg({a})"
    if kind == RAND_EDGE:
        return "RandEdge"
    if kind == NBR:
        return f"Nbr({a},{b})"
    return f"Pair({a},{b})"


@dataclass(frozen=True)
class PlanProvenance:
    """What a plan was derived from; plans are pure functions of this."""

    n: int
    epsilon: float | None
    seed: int


class QueryPlan:
    """Ordered, immutable query sequence stored columnar for batch answering.

    Equality compares the query sequence only, which is what a
    non-adaptivity audit needs; provenance is bookkeeping.
    """

    __slots__ = ("kinds", "arg_a", "arg_b", "provenance")

    def __init__(self, kinds: np.ndarray, arg_a: np.ndarray, arg_b: np.ndarray, provenance: PlanProvenance):
        if not (len(kinds) == len(arg_a) == len(arg_b)):
            raise ValueError("plan columns must have equal length")
        self.kinds = np.ascontiguousarray(kinds, dtype=np.uint8)
        self.arg_a = np.ascontiguousarray(arg_a, dtype=np.int64)
        self.arg_b = np.ascontiguousarray(arg_b, dtype=np.int64)
        self.provenance = provenance
        for arr in (self.kinds, self.arg_a, self.arg_b):
            arr.setflags(write=False)

    @classmethod
    def from_specs(cls, specs: Iterable[QuerySpec], provenance: PlanProvenance) -> "QueryPlan":
        kinds: list[int] = []
        arg_a: list[int] = []
        arg_b: list[int] = []
        for spec in specs:
            if isinstance(spec, Deg):
                kinds.append(DEG), arg_a.append(spec.v), arg_b.append(-1)
            elif isinstance(spec, RandEdge):
                kinds.append(RAND_EDGE), arg_a.append(-1), arg_b.append(-1)
            elif isinstance(spec, Nbr):
                kinds.append(NBR), arg_a.append(spec.v), arg_b.append(spec.i)
            elif isinstance(spec, Pair):
                kinds.append(PAIR), arg_a.append(spec.u), arg_b.append(spec.v)
            else:
                raise TypeError(f"not a query spec: {spec!r}")
        return cls(np.array(kinds, np.uint8), np.array(arg_a, np.int64), np.array(arg_b, np.int64), provenance)

    def __len__(self) -> int:
        return int(self.kinds.shape[0])

    def __iter__(self) -> Iterator[QuerySpec]:
        for kind, a, b in zip(self.kinds, self.arg_a, self.arg_b):
            if kind == DEG:
                yield Deg(int(a))
            elif kind == RAND_EDGE:
                yield _RAND_EDGE
            elif kind == NBR:
                yield Nbr(int(a), int(b))
            else:
                yield Pair(int(a), int(b))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QueryPlan):
            return NotImplemented
        return (
            np.array_equal(self.kinds, other.kinds)
            and np.array_equal(self.arg_a, other.arg_a)
            and np.array_equal(self.arg_b, other.arg_b)
        )

    def counts(self) -> dict[str, int]:
        tally = np.bincount(self.kinds, minlength=4)
        return {name: int(tally[code]) for code, name in enumerate(_KIND_FIELDS)}


Block = tuple[np.ndarray, np.ndarray, np.ndarray]


def deg_block(vertices: np.ndarray) -> Block:
    vertices = np.asarray(vertices, dtype=np.int64)
    count = vertices.shape[0]
    return np.full(count, DEG, np.uint8), vertices, np.full(count, -1, np.int64)


def rand_edge_block(count: int) -> Block:
    return np.full(count, RAND_EDGE, np.uint8), np.full(count, -1, np.int64), np.full(count, -1, np.int64)


def plan_from_blocks(provenance: PlanProvenance, *blocks: Block) -> QueryPlan:
    kinds = np.concatenate([b[0] for b in blocks]) if blocks else np.empty(0, np.uint8)
    arg_a = np.concatenate([b[1] for b in blocks]) if blocks else np.empty(0, np.int64)
    arg_b = np.concatenate([b[2] for b in blocks]) if blocks else np.empty(0, np.int64)
    return QueryPlan(kinds, arg_a, arg_b, provenance)


@dataclass
class QueryLedger:
    """Running per-kind query tally; counts only ever grow."""

    deg: int = 0
    rand_edge: int = 0
    nbr: int = 0
    pair: int = 0

    @property
    def total(self) -> int:
        return self.deg + self.rand_edge + self.nbr + self.pair

    def record(self, kinds: np.ndarray) -> None:
        tally = np.bincount(kinds, minlength=4)
        self.deg += int(tally[DEG])
        self.rand_edge += int(tally[RAND_EDGE])
        self.nbr += int(tally[NBR])
        self.pair += int(tally[PAIR])

    def snapshot(self) -> "QueryLedger":
        return QueryLedger(self.deg, self.rand_edge, self.nbr, self.pair)

    def as_dict(self) -> dict[str, int]:
        return {"deg": self.deg, "rand_edge": self.rand_edge, "nbr": self.nbr, "pair": self.pair}

    def dump_line(self) -> str:
        return f"deg={self.deg} rand_edge={self.rand_edge} nbr={self.nbr} pair={self.pair} total={self.total}"


@dataclass(frozen=True)
class Transcript:
    """A plan plus positionally aligned answers.

    Answer columns by kind: degree lookups put the degree in ``ans_a``;
    random edges fill ``ans_a``/``ans_b`` with the stored ``u < v`` endpoint
    order; neighbor lookups put the neighbor in ``ans_a`` (``-1`` when the
    rank exceeds the degree); pair queries put the membership bit in
    ``ans_a``. Unused slots hold ``-1``.
    """

    plan: QueryPlan
    ans_a: np.ndarray
    ans_b: np.ndarray
    answer_seed: int
    ledger: QueryLedger

    def answers(self) -> list[object]:
        out: list[object] = []
        for kind, a, b in zip(self.plan.kinds, self.ans_a, self.ans_b):
            if kind == RAND_EDGE:
                out.append((int(a), int(b)))
            elif kind == NBR:
                out.append(None if a < 0 else int(a))
            else:
                out.append(int(a))
        return out

    def dump_lines(self) -> list[str]:
        lines = []
        for (kind, qa, qb), answer in zip(
            zip(self.plan.kinds, self.plan.arg_a, self.plan.arg_b), self.answers()
        ):
            shown = "none" if answer is None else f"({answer[0]}, {answer[1]})" if isinstance(answer, tuple) else str(answer)
            lines.append(f"{_format_query(int(kind), int(qa), int(qb))} -> {shown}")
        lines.append(self.ledger.dump_line())
        return lines


def _validate_plan(graph: Graph, plan: QueryPlan) -> None:
    if plan.provenance.n != graph.n:
        raise ValueError(f"plan was built for n={plan.provenance.n}, graph has n={graph.n}")
    kinds, a, b = plan.kinds, plan.arg_a, plan.arg_b
    vertex_args = (kinds == DEG) | (kinds == NBR) | (kinds == PAIR)
    bad = vertex_args & ((a < 0) | (a >= graph.n))
    pair_mask = kinds == PAIR
    bad |= pair_mask & ((b < 0) | (b >= graph.n))
    nbr_mask = kinds == NBR
    bad |= nbr_mask & (b < 1)
    if bad.any():
        pos = int(np.flatnonzero(bad)[0])
        raise ValueError(
            f"query {pos} ({_format_query(int(kinds[pos]), int(a[pos]), int(b[pos]))}) has invalid arguments"
        )


def answer_plan(graph: Graph, plan: QueryPlan, answer_seed: int, ledger: QueryLedger | None = None) -> Transcript:
    """Answer every query in ``plan`` against ``graph`` in one batch.

    Random-edge draws are i.i.d. uniform over the edge set, driven solely by
    ``answer_seed``. The ledger (fresh unless one is passed in to accumulate a
    session) grows by exactly the plan's per-kind multiplicities; a plan
    containing random-edge queries fails atomically on an edgeless graph,
    before anything is metered.
    """
    _validate_plan(graph, plan)
    kinds = plan.kinds
    rand_mask = kinds == RAND_EDGE
    n_rand = int(rand_mask.sum())
    if n_rand and graph.m == 0:
        raise EmptyGraphError("graph has no edges; random-edge queries cannot be answered")

    ans_a = np.full(len(plan), -1, dtype=np.int64)
    ans_b = np.full(len(plan), -1, dtype=np.int64)

    deg_mask = kinds == DEG
    if deg_mask.any():
        ans_a[deg_mask] = graph.degrees[plan.arg_a[deg_mask]]

    if n_rand:
        rng = np.random.default_rng(answer_seed)
        idx = rng.integers(0, graph.m, size=n_rand)
        ans_a[rand_mask] = graph.edges[idx, 0]
        ans_b[rand_mask] = graph.edges[idx, 1]

    nbr_mask = kinds == NBR
    if nbr_mask.any():
        v = plan.arg_a[nbr_mask]
        rank = plan.arg_b[nbr_mask]
        offsets, flat = graph._adjacency
        defined = rank <= graph.degrees[v]
        slots = np.where(defined, offsets[v] + rank - 1, 0)
        ans_a[nbr_mask] = np.where(defined, flat[slots] if flat.size else -1, -1)

    pair_mask = kinds == PAIR
    if pair_mask.any():
        u = plan.arg_a[pair_mask]
        v = plan.arg_b[pair_mask]
        codes = np.minimum(u, v) * np.int64(graph.n) + np.maximum(u, v)
        table = graph.edge_codes
        slot = np.searchsorted(table, codes)
        found = (slot < table.size) & (table[np.minimum(slot, max(table.size - 1, 0))] == codes) if table.size else np.zeros(codes.shape, bool)
        ans_a[pair_mask] = found.astype(np.int64)

    if ledger is None:
        ledger = QueryLedger()
    ledger.record(kinds)
    return Transcript(plan=plan, ans_a=ans_a, ans_b=ans_b, answer_seed=answer_seed, ledger=ledger)


PlanFn = Callable[[Graph, float, int], QueryPlan]


def audit_nonadaptive(plan_fn: PlanFn, graphs: Sequence[Graph], epsilon: float, seed: int) -> bool:
    """True iff ``plan_fn`` emits one identical query sequence for every graph.

    ``plan_fn`` receives each graph so that adaptive cheaters (plans shaped by
    edges or degrees) are expressible and get caught; a compliant planner uses
    nothing beyond ``graph.n``, ``epsilon`` and ``seed``. All graphs must share
    the same vertex count, otherwise the comparison is meaningless.
    """
    graphs = list(graphs)
    if len({g.n for g in graphs}) > 1:
        raise ValueError("audit requires graphs with identical vertex counts")
    plans = [plan_fn(g, epsilon, seed) for g in graphs]
    return all(p == plans[0] for p in plans[1:])
