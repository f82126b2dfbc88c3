"""Randomised partial colouring with orientation-based conflict resolution,
greedy completion, a retry driver, and strong edge colouring via L^2(G).

Colours are ``1..C``; ``0`` marks an uncoloured vertex. Orientation bit
True means the edge points toward its lower-indexed endpoint, and in a
conflict the endpoint the edge points to loses its colour.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .graph import Graph
from .strong import StrongIndex, _bits, edge_distance_le1, square_linegraph

UNCOLORED = 0


class GreedyFailure(RuntimeError):
    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"no free colour for vertex {vertex}")


class RetryExhausted(RuntimeError):
    def __init__(self, attempts: int, best_uncolored: int, best_attempt: int):
        self.attempts = attempts
        self.best_uncolored = best_uncolored
        self.best_attempt = best_attempt
        super().__init__(f"no completion in {attempts} attempts "
                         f"(fewest uncoloured after a trial: {best_uncolored})")


def edge_array(H: Graph) -> np.ndarray:
    arr = H.__dict__.get("_edge_array")
    if arr is None:
        arr = np.asarray(H.edges, dtype=np.int64).reshape(-1, 2)
        H.__dict__["_edge_array"] = arr
    return arr


def resolve_conflicts(ends: np.ndarray, initial: np.ndarray, orientation: np.ndarray) -> np.ndarray:
    """Uncolour, for every monochromatic edge, the endpoint it points to.

    Works on one trial (``initial`` shape (n,)) or a batch (shape (T, n),
    ``orientation`` (T, m)). Only the original colours are compared, so a
    vertex hit by any conflict is uncoloured and nothing cascades.
    """
    colors = initial.copy()
    if ends.shape[0] == 0:
        return colors
    lo, hi = ends[:, 0], ends[:, 1]
    mono = initial[..., lo] == initial[..., hi]
    victim = np.where(orientation, lo, hi)
    if initial.ndim == 1:
        colors[victim[mono]] = UNCOLORED
    else:
        rows, cols = np.nonzero(mono)
        colors[rows, victim[rows, cols]] = UNCOLORED
    return colors


@dataclass
class ColoringState:
    graph: Graph
    C: int
    initial: np.ndarray
    orientation: np.ndarray
    colors: np.ndarray

    def uncolored(self) -> np.ndarray:
        return np.flatnonzero(self.colors == UNCOLORED)

    def is_proper_partial(self) -> bool:
        ends = edge_array(self.graph)
        if ends.shape[0] == 0:
            return True
        a, b = self.colors[ends[:, 0]], self.colors[ends[:, 1]]
        return not np.any((a == b) & (a != UNCOLORED))


def draw_trial(n: int, m: int, C: int, rng: np.random.Generator, batch: int | None = None):
    shape_v = (n,) if batch is None else (batch, n)
    shape_e = (m,) if batch is None else (batch, m)
    initial = rng.integers(1, C + 1, size=shape_v, dtype=np.int64)
    orientation = rng.integers(0, 2, size=shape_e, dtype=np.int8).astype(bool)
    return initial, orientation


def run_trial(H: Graph, C: int, rng: np.random.Generator) -> ColoringState:
    if C < 1:
        raise ValueError("palette size must be >= 1")
    initial, orientation = draw_trial(H.n, H.m, C, rng)
    colors = resolve_conflicts(edge_array(H), initial, orientation)
    return ColoringState(H, C, initial, orientation, colors)


def run_batch(H: Graph, C: int, rng: np.random.Generator, trials: int):
    """``trials`` independent trials at once; returns (initial, colors)."""
    initial, orientation = draw_trial(H.n, H.m, C, rng, batch=trials)
    return initial, resolve_conflicts(edge_array(H), initial, orientation)


# ---------------------------------------------------------------- savings

@dataclass(frozen=True)
class SavedReport:
    u: int
    pu: int
    tu: int
    colored_in_N: int
    distinct_colors_in_N: int

    @property
    def saved(self) -> int:
        return self.colored_in_N - self.distinct_colors_in_N


def saved_report(state: ColoringState, u: int) -> SavedReport:
    H = state.graph
    adj = H.neighbor_sets
    kept = [w for w in H.adjacency[u] if state.colors[w] != UNCOLORED]
    col = {w: int(state.colors[w]) for w in kept}
    pu = sum(1 for a, b in combinations(kept, 2)
             if col[a] == col[b] and b not in adj[a])
    tu = sum(1 for a, b, c in combinations(kept, 3)
             if col[a] == col[b] == col[c]
             and b not in adj[a] and c not in adj[a] and c not in adj[b])
    return SavedReport(u, pu, tu, len(kept), len(set(col.values())))


class NeighborhoodTally:
    """Batch evaluation of P_u, T_u and savings for a fixed vertex u.

    Non-adjacent pairs and pairwise non-adjacent triples of N(u) are listed
    once; each call then scores a (T, n) array of final colours.
    """

    def __init__(self, H: Graph, u: int):
        adj = H.neighbor_sets
        nb = H.adjacency[u]
        self.u = u
        self.nbhd = np.asarray(nb, dtype=np.int64)
        self.pairs = np.asarray([(a, b) for a, b in combinations(nb, 2) if b not in adj[a]],
                                dtype=np.int64).reshape(-1, 2)
        self.triples = np.asarray(
            [(a, b, c) for a, b, c in combinations(nb, 3)
             if b not in adj[a] and c not in adj[a] and c not in adj[b]],
            dtype=np.int64).reshape(-1, 3)

    def pu(self, colors: np.ndarray) -> np.ndarray:
        if self.pairs.size == 0:
            return np.zeros(colors.shape[0], dtype=np.int64)
        a = colors[:, self.pairs[:, 0]]
        b = colors[:, self.pairs[:, 1]]
        return ((a == b) & (a != UNCOLORED)).sum(1)

    def tu(self, colors: np.ndarray) -> np.ndarray:
        if self.triples.size == 0:
            return np.zeros(colors.shape[0], dtype=np.int64)
        a = colors[:, self.triples[:, 0]]
        b = colors[:, self.triples[:, 1]]
        c = colors[:, self.triples[:, 2]]
        return ((a == b) & (b == c) & (a != UNCOLORED)).sum(1)

    def saved(self, colors: np.ndarray) -> np.ndarray:
        if self.nbhd.size == 0:
            return np.zeros(colors.shape[0], dtype=np.int64)
        sub = np.sort(colors[:, self.nbhd], axis=1)
        colored = (sub != UNCOLORED).sum(1)
        new = np.ones_like(sub, dtype=bool)
        new[:, 1:] = sub[:, 1:] != sub[:, :-1]
        distinct = (new & (sub != UNCOLORED)).sum(1)
        return colored - distinct

    def max_class(self, colors: np.ndarray) -> np.ndarray:
        """Largest number of N(u) vertices sharing one colour (any colouring,
        usually the step-1 one)."""
        if self.nbhd.size == 0:
            return np.zeros(colors.shape[0], dtype=np.int64)
        sub = np.sort(colors[:, self.nbhd], axis=1)
        best = np.ones(sub.shape[0], dtype=np.int64)
        run = np.ones(sub.shape[0], dtype=np.int64)
        for j in range(1, sub.shape[1]):
            same = (sub[:, j] == sub[:, j - 1]) & (sub[:, j] != UNCOLORED)
            run = np.where(same, run + 1, 1)
            best = np.maximum(best, run)
        return best


# ---------------------------------------------------------------- completion

def greedy_complete(state: ColoringState, order: str | Sequence[int] = "index") -> np.ndarray:
    """Colour the uncoloured vertices greedily with the smallest free colour.

    ``order`` is ``"index"`` (increasing vertex id), ``"degree"`` (most
    uncoloured neighbours first, ties by id) or an explicit vertex sequence.
    """
    H = state.graph
    colors = state.colors.copy()
    todo = [int(v) for v in np.flatnonzero(colors == UNCOLORED)]
    if isinstance(order, str):
        if order == "degree":
            pending = set(todo)
            todo.sort(key=lambda v: (-sum(1 for w in H.adjacency[v] if w in pending), v))
        elif order != "index":
            raise ValueError(f"unknown greedy order {order!r}")
    else:
        pending = set(todo)
        todo = [int(v) for v in order if int(v) in pending]
        if len(todo) != len(pending):
            raise ValueError("explicit order must list every uncoloured vertex")
    for v in todo:
        used = {int(colors[w]) for w in H.adjacency[v]}
        c = next((c for c in range(1, state.C + 1) if c not in used), None)
        if c is None:
            raise GreedyFailure(v)
        colors[v] = c
    return colors


def blank_state(H: Graph, C: int) -> ColoringState:
    z = np.zeros(H.n, dtype=np.int64)
    return ColoringState(H, C, z.copy(), np.zeros(H.m, dtype=bool), z)


def attempt_rng(master_seed: int, attempt: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(attempt)]))


@dataclass
class ColoringResult:
    colors: np.ndarray
    attempts: int
    uncolored_after_trial: int


def color_until_success(H: Graph, C: int, max_retries: int = 100, master_seed: int = 0,
                        order: str | Sequence[int] = "index") -> ColoringResult:
    """Repeat trial + greedy completion until a proper colouring appears."""
    if C < 1:
        raise ValueError("palette size must be >= 1")
    best = (math.inf, -1)
    for attempt in range(max_retries):
        state = run_trial(H, C, attempt_rng(master_seed, attempt))
        left = int((state.colors == UNCOLORED).sum())
        try:
            colors = greedy_complete(state, order)
        except GreedyFailure:
            if left < best[0]:
                best = (left, attempt)
            continue
        return ColoringResult(colors, attempt + 1, left)
    raise RetryExhausted(max_retries, int(best[0]) if best[1] >= 0 else -1, best[1])


def strong_edge_color(G: Graph, C: int, max_retries: int = 100, seed: int = 0) -> dict[int, int]:
    res = color_until_success(square_linegraph(G), C, max_retries, seed)
    return {e: int(c) for e, c in enumerate(res.colors)}


def greedy_strong_color(G: Graph) -> tuple[dict[int, int], int]:
    """Greedy colouring of L^2(G) in edge order; at most 2Δ²-2Δ+1 colours."""
    nbr = StrongIndex.of(G).nbr
    colors: dict[int, int] = {}
    for e in range(G.m):
        used = {colors[f] for f in _bits(nbr[e]) if f in colors}
        c = 1
        while c in used:
            c += 1
        colors[e] = c
    return colors, max(colors.values(), default=0)


def greedy_bound(delta: int) -> int:
    return 2 * delta * delta - 2 * delta + 1


def validate_strong_coloring(G: Graph, coloring: dict[int, int]) -> tuple[bool, tuple[int, int] | None]:
    """Check that each colour class is an induced matching; returns the first
    offending edge pair if not."""
    classes: dict[int, list[int]] = {}
    for e in range(G.m):
        if e not in coloring:
            raise ValueError(f"edge {e} is uncoloured")
        classes.setdefault(coloring[e], []).append(e)
    bad = None
    for members in classes.values():
        for i, e in enumerate(members):
            for f in members[i + 1:]:
                if edge_distance_le1(G, e, f) and (bad is None or (e, f) < bad):
                    bad = (e, f)
    return bad is None, bad


def validate_vertex_coloring(H: Graph, colors: Sequence[int]) -> tuple[bool, tuple[int, int] | None]:
    for a, b in H.edges:
        if colors[a] == colors[b]:
            return False, (a, b)
    return True, None


def color_class_sizes(colors: Sequence[int]) -> Counter:
    return Counter(int(c) for c in colors if c != UNCOLORED)
