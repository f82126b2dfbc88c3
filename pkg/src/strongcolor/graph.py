"""Simple undirected graphs: representation, edge-list I/O, generators and
the doubling embedding into a regular supergraph."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Invalid graph data or generator parameters."""


class ParseError(GraphError):
    """Base class for edge-list parse failures; carries the 1-based line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class MalformedLine(ParseError):
    pass


class VertexOutOfRange(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass


class SelfLoop(ParseError):
    pass


class RetryBudgetExhausted(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Edges are stored as ``(u, v)`` with ``u < v``; the position of an edge in
    ``edges`` is its stable edge id.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        norm = []
        seen = set()
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise SelfLoop(f"self-loop at vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise VertexOutOfRange(f"edge ({a},{b}) outside 0..{self.n - 1}")
            if a > b:
                a, b = b, a
            if (a, b) in seen:
                raise DuplicateEdge(f"duplicate edge ({a},{b})")
            seen.add((a, b))
            norm.append((a, b))
            nbrs[a].append(b)
            nbrs[b].append(a)
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(x)) for x in nbrs))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @cached_property
    def min_degree(self) -> int:
        return min((len(a) for a in self.adjacency), default=0)

    def is_regular(self) -> bool:
        return self.max_degree == self.min_degree

    def has_edge(self, a: int, b: int) -> bool:
        nb = self.adjacency[a]
        i = bisect.bisect_left(nb, b)
        return i < len(nb) and nb[i] == b

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def edge_id(self, a: int, b: int) -> int:
        return self.edge_index[(a, b) if a < b else (b, a)]

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        if self.edges:
            e = np.asarray(self.edges)
            A[e[:, 0], e[:, 1]] = 1
            A[e[:, 1], e[:, 0]] = 1
        return A

    def induced_subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph induced on ``vertices``, relabelled in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        edges = [(pos[a], pos[b]) for a, b in self.edges if a in pos and b in pos]
        return Graph(len(vertices), tuple(edges))


# ---------------------------------------------------------------- edge lists

def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` / ``u v`` edge-list format.

    Blank lines and lines starting with ``#`` are skipped, so generator
    headers (seed records) survive a round trip through files.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        rows.append((lineno, s))
    if not rows:
        raise MalformedLine("missing 'n m' header", 1)
    lineno, header = rows[0]
    n, m = _two_ints(header, lineno)
    if n < 0 or m < 0:
        raise MalformedLine("negative count in header", lineno)
    body = rows[1:]
    if len(body) != m:
        raise MalformedLine(f"header declares {m} edges, found {len(body)}", lineno)
    seen: set[tuple[int, int]] = set()
    edges = []
    for lineno, s in body:
        a, b = _two_ints(s, lineno)
        if not (0 <= a < n and 0 <= b < n):
            raise VertexOutOfRange(f"vertex outside 0..{n - 1}", lineno)
        if a == b:
            raise SelfLoop(f"self-loop at {a}", lineno)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise DuplicateEdge(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append(key)
    return Graph(n, tuple(edges))


def _two_ints(s: str, lineno: int) -> tuple[int, int]:
    parts = s.split()
    if len(parts) != 2:
        raise MalformedLine(f"expected two integers, got {s!r}", lineno)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise MalformedLine(f"expected two integers, got {s!r}", lineno) from None


def write_graph(G: Graph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines.extend(f"{a} {b}" for a, b in G.edges)
    return "\n".join(lines)


# ---------------------------------------------------------------- generators

def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> Graph:
    if n < 0:
        raise GraphError("complete needs n >= 0")
    return Graph(n, tuple((a, b) for a in range(n) for b in range(a + 1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 0 or b < 0:
        raise GraphError("part sizes must be non-negative")
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def star(n: int) -> Graph:
    """Star with centre 0 and ``n`` leaves."""
    if n < 0:
        raise GraphError("star needs n >= 0")
    return Graph(n + 1, tuple((0, i) for i in range(1, n + 1)))


def blowup_c5(k: int) -> Graph:
    """Replace each vertex of C5 by a stable set of size k; consecutive
    sets are joined completely. Part ``i`` holds vertices ``i*k .. i*k+k-1``."""
    if k < 1:
        raise GraphError("blow-up factor must be >= 1")
    edges = []
    for i in range(5):
        j = (i + 1) % 5
        for s in range(k):
            for t in range(k):
                edges.append((i * k + s, j * k + t))
    return Graph(5 * k, tuple(edges))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def gnp(n: int, p: float, seed: "int | np.random.SeedSequence" = 0) -> Graph:
    """Erdős–Rényi graph: each of the C(n,2) pairs, in lexicographic order,
    kept independently with probability p."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise GraphError("gnp needs n >= 0 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return Graph(n, tuple(zip(iu[keep].tolist(), ju[keep].tolist())))


def random_regular(n: int, r: int, seed: int = 0, max_restarts: int = 10_000) -> Graph:
    """Simple r-regular graph from the pairing model.

    Stubs are paired in random order; pairs that would create a loop or a
    multi-edge are returned to the pool and reshuffled. A restart happens
    only when the remaining stubs admit no valid pair.
    """
    if r < 0 or n < 0 or (n * r) % 2 or (r >= n and r > 0):
        raise GraphError("random_regular needs n*r even and 0 <= r < n")
    rng = np.random.default_rng(seed)
    if r == 0:
        return Graph(n)
    for _ in range(max_restarts):
        edges = _try_pairing(n, r, rng)
        if edges is not None:
            return Graph(n, tuple(sorted(edges)))
    raise RetryBudgetExhausted(f"random_regular({n},{r}) failed after {max_restarts} restarts")


def _try_pairing(n: int, r: int, rng: np.random.Generator) -> set[tuple[int, int]] | None:
    edges: set[tuple[int, int]] = set()
    stubs = np.repeat(np.arange(n), r)
    while stubs.size:
        rng.shuffle(stubs)
        left = []
        for a, b in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
            if a > b:
                a, b = b, a
            if a != b and (a, b) not in edges:
                edges.add((a, b))
            else:
                left.extend((a, b))
        if len(left) == stubs.size:
            return None
        stubs = np.asarray(left, dtype=np.int64)
        if stubs.size and not _pair_possible(stubs, edges):
            return None
    return edges


def _pair_possible(stubs: np.ndarray, edges: set[tuple[int, int]]) -> bool:
    verts = np.unique(stubs).tolist()
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            if (a, b) not in edges:
                return True
    return False


GENERATORS = {
    "cycle": (cycle, ("n",)),
    "complete": (complete, ("n",)),
    "complete_bipartite": (complete_bipartite, ("a", "b")),
    "star": (star, ("n",)),
    "blowup_c5": (blowup_c5, ("k",)),
    "petersen": (petersen, ()),
    "random_regular": (random_regular, ("n", "r")),
    "gnp": (gnp, ("n", "p")),
}
RANDOM_KINDS = frozenset({"random_regular", "gnp"})


def generate(kind: str, seed: int = 0, **params) -> Graph:
    """Dispatch to a named generator; random kinds also receive ``seed``."""
    try:
        fn, names = GENERATORS[kind]
    except KeyError:
        raise GraphError(f"unknown generator kind {kind!r}") from None
    missing = [p for p in names if p not in params]
    if missing:
        raise GraphError(f"{kind} requires parameters {missing}")
    args = [params[p] for p in names]
    if kind in RANDOM_KINDS:
        return fn(*args, seed=seed)
    return fn(*args)


# ---------------------------------------------------------------- embedding

def embed_regular(G: Graph, r: int) -> Graph:
    """Embed G into an r-regular graph by repeated doubling.

    Each round takes two disjoint copies of the current graph (copy one keeps
    labels ``0..N-1``, copy two is shifted by N) and joins every vertex of
    degree below r to its own copy. G stays induced on ``0..n-1``.
    """
    if r < G.max_degree:
        raise GraphError(f"target degree {r} below max degree {G.max_degree}")
    if G.n == 0:
        return G
    n = G.n
    edges = list(G.edges)
    deg = [G.degree(v) for v in range(n)]
    while min(deg) < r:
        deficient = [v for v in range(n) if deg[v] < r]
        edges = edges + [(a + n, b + n) for a, b in edges] + [(v, v + n) for v in deficient]
        deg = deg + deg
        for v in deficient:
            deg[v] += 1
            deg[v + n] += 1
        n *= 2
    return Graph(n, tuple(edges))


# ---------------------------------------------------------------- densities

def local_density(G: Graph, v: int, r: int | None = None) -> tuple[int, float]:
    """Number of edges inside N(v) and the implied delta = 1 - count/C(r,2).

    ``r`` defaults to d(v); delta is 1 when r < 2.
    """
    nb = G.adjacency[v]
    if r is None:
        r = len(nb)
    if r < len(nb):
        raise GraphError("r must be at least d(v)")
    sets = G.neighbor_sets
    inside = sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b in sets[a])
    pairs = math.comb(r, 2)
    delta = 1.0 if pairs == 0 else 1.0 - inside / pairs
    return inside, delta


def disjoint_union(graphs: Iterable[Graph]) -> Graph:
    edges = []
    off = 0
    for H in graphs:
        edges.extend((a + off, b + off) for a, b in H.edges)
        off += H.n
    return Graph(off, tuple(edges))
