"""Seeded graph generators, including the planted-support pair used by the
sample-complexity demonstration."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphValidationError, build_graph, read_edge_list

# Above this many candidate pairs we sample edges by rejection instead of
# materializing every pair, which keeps gen_gnm cheap for large sparse graphs.
_DENSE_ENUMERATION_LIMIT = 2_000_000


def gen_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniform random graph with exactly ``m`` distinct edges on ``n`` vertices."""
    if n < 1:
        raise GraphValidationError("gnm requires n >= 1")
    max_pairs = n * (n - 1) // 2
    if not 0 <= m <= max_pairs:
        raise GraphValidationError(f"gnm: m={m} outside [0, {max_pairs}] for n={n}")
    rng = np.random.default_rng(seed)
    if max_pairs <= _DENSE_ENUMERATION_LIMIT:
        iu, iv = np.triu_indices(n, k=1)
        chosen = rng.permutation(max_pairs)[:m]
        return build_graph(n, np.column_stack((iu[chosen], iv[chosen])))

    collected = np.empty(0, dtype=np.int64)
    distinct = 0
    while distinct < m:
        batch = max(2 * (m - distinct), 1024)
        u = rng.integers(0, n, size=batch, dtype=np.int64)
        v = rng.integers(0, n, size=batch, dtype=np.int64)
        keep = u != v
        codes = np.minimum(u[keep], v[keep]) * np.int64(n) + np.maximum(u[keep], v[keep])
        collected = np.concatenate((collected, codes))
        distinct = np.unique(collected).size
    # keep the first m distinct codes in draw order so the edge set is uniform
    _, first_pos = np.unique(collected, return_index=True)
    codes = collected[np.sort(first_pos)[:m]]
    return build_graph(n, np.column_stack((codes // n, codes % n)))


def gen_path(n: int) -> Graph:
    if n < 2:
        raise GraphValidationError("path requires n >= 2")
    u = np.arange(n - 1, dtype=np.int64)
    return build_graph(n, np.column_stack((u, u + 1)))


def gen_star(n: int) -> Graph:
    if n < 2:
        raise GraphValidationError("star requires n >= 2")
    spokes = np.arange(1, n, dtype=np.int64)
    return build_graph(n, np.column_stack((np.zeros(n - 1, dtype=np.int64), spokes)))


def gen_clique_plus_isolated(n: int, k: int) -> Graph:
    """Clique on vertices ``0..k-1``; the remaining ``n - k`` vertices are isolated."""
    if n < 2:
        raise GraphValidationError("clique_plus_isolated requires n >= 2")
    if not 0 <= k <= n:
        raise GraphValidationError(f"clique_plus_isolated: k={k} outside [0, {n}]")
    iu, iv = np.triu_indices(k, k=1)
    return build_graph(n, np.column_stack((iu, iv)))


def gen_skewed(n: int, exponent: float, seed: int) -> Graph:
    """Heavy-tailed random graph: degrees drawn with P(d) proportional to
    ``d**-exponent`` over ``1..round(sqrt(n))``, realized as a simple graph by
    pairing stubs and dropping self-loops and duplicate pairs."""
    if n < 2:
        raise GraphValidationError("skewed requires n >= 2")
    if exponent <= 0:
        raise GraphValidationError("skewed requires a positive exponent")
    rng = np.random.default_rng(seed)
    d_max = max(2, round(math.sqrt(n)))
    weights = np.arange(1, d_max + 1, dtype=float) ** -exponent
    weights /= weights.sum()
    target = rng.choice(d_max, size=n, p=weights).astype(np.int64) + 1
    if target.sum() % 2:
        target[int(np.argmin(target))] += 1
    stubs = rng.permutation(np.repeat(np.arange(n, dtype=np.int64), target))
    u, v = stubs[0::2], stubs[1::2]
    keep = u != v
    return build_graph(n, np.column_stack((u[keep], v[keep])))


def gen_named(shape: str, n: int, seed: int = 0, *, k: int | None = None, exponent: float | None = None) -> Graph:
    """Dispatch to a named generator. ``k`` is required for
    ``clique_plus_isolated`` and ``exponent`` for ``skewed``."""
    if shape == "path":
        return gen_path(n)
    if shape == "star":
        return gen_star(n)
    if shape == "clique_plus_isolated":
        if k is None:
            raise GraphValidationError("clique_plus_isolated needs k")
        return gen_clique_plus_isolated(n, k)
    if shape == "skewed":
        if exponent is None:
            raise GraphValidationError("skewed needs an exponent")
        return gen_skewed(n, exponent, seed)
    raise GraphValidationError(f"unknown graph shape {shape!r}")


def graph_from_spec(spec: str, seed: int = 0) -> Graph:
    """Build a graph from a compact ``name:arg1,arg2`` string.

    Understood forms: ``gnm:n,m``, ``path:n``, ``star:n``,
    ``clique_plus_isolated:n,k``, ``skewed:n,exponent``.
    """
    name, _, argstr = spec.partition(":")
    args = [a for a in argstr.split(",") if a] if argstr else []
    try:
        if name == "gnm" and len(args) == 2:
            return gen_gnm(int(args[0]), int(args[1]), seed)
        if name in ("path", "star") and len(args) == 1:
            return gen_named(name, int(args[0]), seed)
        if name == "clique_plus_isolated" and len(args) == 2:
            return gen_clique_plus_isolated(int(args[0]), int(args[1]))
        if name == "skewed" and len(args) == 2:
            return gen_skewed(int(args[0]), float(args[1]), seed)
    except ValueError as exc:
        raise GraphValidationError(f"bad graph spec {spec!r}: {exc}") from None
    raise GraphValidationError(f"bad graph spec {spec!r}")


def load_graph(source: str, seed: int = 0) -> Graph:
    """Resolve ``file:PATH`` to an edge-list file, anything else via
    :func:`graph_from_spec`."""
    if source.startswith("file:"):
        return read_edge_list(source[len("file:") :])
    return graph_from_spec(source, seed)


@dataclass(frozen=True)
class LowerBoundInstance:
    """Two graphs that agree everywhere a local probe is likely to look.

    Both graphs place all their edges inside the same small planted vertex
    set (a clique's worth of candidate slots); every vertex outside it is
    isolated. ``graph_a`` realizes ``n`` distinct slots, ``graph_b`` only
    ``n // 2 - 1``, so uniform edge draws collide about twice as often on
    ``graph_b`` while degree or neighbor probes almost never touch either.
    """

    graph_a: Graph
    graph_b: Graph
    planted_set: np.ndarray
    mapping_seed: int


def gen_lowerbound_instance(n: int, seed: int) -> LowerBoundInstance:
    """Sample a fresh placement and slot mapping for the instance pair.

    Needs ``n >= 7``: the planted set must both fit among the ``n`` vertices
    and offer at least ``n`` candidate edge slots.
    """
    side = 2 * math.ceil(math.sqrt(n)) + 1 if n >= 1 else 0
    if n < 7:
        raise GraphValidationError(f"lower-bound instance needs n >= 7 (planted set of {side} cannot fit n={n})")
    capacity = side * (side - 1) // 2
    if capacity < n:
        raise GraphValidationError(f"planted set of {side} offers only {capacity} slots for n={n}")

    rng = np.random.default_rng(seed)
    planted = np.sort(rng.choice(n, size=side, replace=False).astype(np.int64))
    iu, iv = np.triu_indices(side, k=1)
    shuffle = rng.permutation(capacity)
    slot_u = planted[iu[shuffle]]
    slot_v = planted[iv[shuffle]]

    edges_a = np.column_stack((slot_u[:n], slot_v[:n]))
    support_b = rng.permutation(n)[: n // 2 - 1]  # fresh uniform bijection, truncated
    edges_b = np.column_stack((slot_u[support_b], slot_v[support_b]))
    return LowerBoundInstance(
        graph_a=build_graph(n, edges_a),
        graph_b=build_graph(n, edges_b),
        planted_set=planted,
        mapping_seed=seed,
    )
