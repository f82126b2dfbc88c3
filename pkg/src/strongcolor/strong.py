"""Strong neighbourhoods and the square of the linegraph.

Everything here is computed by direct counting on the input graph, so
non-regular graphs are handled; the closed forms that only hold for regular
graphs live in :func:`mxy_closed_form` and friends and are used as checks.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .graph import Graph


# ---------------------------------------------------------------- L^2(G) masks

class StrongIndex:
    """Bitset view of L^2(G): bit f of ``nbr[e]`` is set iff f is a strong
    neighbour of e. Built once per graph and cached on it."""

    def __init__(self, G: Graph):
        self.graph = G
        inc = [0] * G.n
        for i, (a, b) in enumerate(G.edges):
            bit = 1 << i
            inc[a] |= bit
            inc[b] |= bit
        # edges touching the closed neighbourhood of each vertex
        closed = []
        for w in range(G.n):
            mask = inc[w]
            for z in G.adjacency[w]:
                mask |= inc[z]
            closed.append(mask)
        self.incident = inc
        self.nbr = [(closed[a] | closed[b]) & ~(1 << i) for i, (a, b) in enumerate(G.edges)]

    @classmethod
    def of(cls, G: Graph) -> "StrongIndex":
        idx = G.__dict__.get("_strong_index")
        if idx is None:
            idx = cls(G)
            G.__dict__["_strong_index"] = idx
        return idx

    def degree(self, e: int) -> int:
        return self.nbr[e].bit_count()

    def induced_edges(self, e: int) -> int:
        """m_e: L^2 edges with both ends in N^s_e (= L^2 triangles on e)."""
        ne = self.nbr[e]
        nbr = self.nbr
        total = 0
        for f in _bits(ne):
            total += (nbr[f] & ne).bit_count()
        return total // 2


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def edge_distance_le1(G: Graph, e: int, f: int) -> bool:
    """True iff edges e and f share an endpoint or are joined by an edge."""
    if e == f:
        raise ValueError("edge_distance_le1 needs two distinct edges")
    a, b = G.edges[e]
    c, d = G.edges[f]
    if {a, b} & {c, d}:
        return True
    return any(G.has_edge(x, y) for x in (a, b) for y in (c, d))


def strong_neighborhood(G: Graph, e: int) -> frozenset[int]:
    return frozenset(_bits(StrongIndex.of(G).nbr[e]))


def strong_degree(G: Graph, e: int) -> int:
    return StrongIndex.of(G).degree(e)


def induced_edge_count(G: Graph, e: int) -> int:
    return StrongIndex.of(G).induced_edges(e)


def square_linegraph(G: Graph) -> Graph:
    """L^2(G); vertex i of the result is edge i of G."""
    idx = StrongIndex.of(G)
    edges = [(e, f) for e in range(G.m) for f in _bits(idx.nbr[e] >> (e + 1) << (e + 1))]
    return Graph(G.m, tuple(edges))


# ---------------------------------------------------------------- statistics

@dataclass(frozen=True)
class StrongStats:
    """Per-edge counts around e = uv. Integer fields are exact; the
    normalised alpha/beta/gamma are derived properties.

    ``common`` = |N(u) ∩ N(v)|, ``x_edges`` = edges inside X,
    ``beta_edges`` = distinct edges on a 4-cycle through e or on a triangle
    through exactly one of u, v. ``c4_e`` and ``one_end_triangles`` are the
    same structures counted with multiplicity.
    """

    edge: int
    u: int
    v: int
    delta: int
    ds: int
    me: int
    common: int
    beta_edges: int
    c4_e: int
    one_end_triangles: int
    x_edges: int
    gamma_count: int
    mxy: int
    c4xy: int
    x_size: int
    y_size: int

    @property
    def alpha(self) -> float:
        return self.common / self.delta

    @property
    def beta(self) -> float:
        return self.beta_edges / self.delta**2

    @property
    def beta_x(self) -> float:
        return self.x_edges / self.delta**2

    @property
    def gamma_e(self) -> float:
        return self.gamma_count / self.delta**3

    def degree_bound(self) -> int:
        """(2 - alpha - beta)Δ² - 2Δ, kept in integers."""
        D = self.delta
        return 2 * D * D - self.common * D - self.beta_edges - 2 * D

    def degree_bound_multiplicity(self) -> int:
        """Same bound with beta counted with multiplicity (4-cycles plus
        one-endpoint triangles). Fails on K4; kept for reporting."""
        D = self.delta
        return 2 * D * D - self.common * D - self.c4_e - self.one_end_triangles - 2 * D

    def density_bound(self) -> float:
        D = self.delta
        return 1.5 * D**4 + 5 * D**3


def strong_stats(G: Graph, e: int) -> StrongStats:
    u, v = G.edges[e]
    adj = G.neighbor_sets
    D = G.max_degree
    Nu, Nv = adj[u], adj[v]
    common = len(Nu & Nv)
    X = (Nu | Nv) - {u, v}
    Y = set()
    for x in X:
        Y |= adj[x]
    Y -= X | {u, v}

    x_edges = sum(1 for x in X for z in adj[x] if z in X) // 2

    # 4-cycles u-x-y-v and triangles through exactly one endpoint
    beta_set = set()
    c4_e = 0
    Nu_ = Nu - {v}
    Nv_ = Nv - {u}
    for x in Nu_:
        for y in adj[x] & Nv_:
            c4_e += 1
            beta_set.add((min(x, y), max(x, y)))
    tri = 0
    for w, Nw in ((u, Nu_), (v, Nv_)):
        for x in Nw:
            for y in adj[x] & Nw:
                if x < y:
                    tri += 1
                    beta_set.add((x, y))

    dX = {y: len(adj[y] & X) for y in Y}
    mxy = sum(dX.values())
    gamma_count = sum(d * (D - d) for d in dX.values())

    Xl = sorted(X)
    c4xy = 0
    ynb = [adj[x] & Y for x in Xl]
    for i in range(len(Xl)):
        for j in range(i + 1, len(Xl)):
            c = len(ynb[i] & ynb[j])
            c4xy += c * (c - 1) // 2

    idx = StrongIndex.of(G)
    return StrongStats(
        edge=e, u=u, v=v, delta=D,
        ds=idx.degree(e), me=idx.induced_edges(e),
        common=common, beta_edges=len(beta_set), c4_e=c4_e, one_end_triangles=tri,
        x_edges=x_edges, gamma_count=gamma_count, mxy=mxy, c4xy=c4xy,
        x_size=len(X), y_size=len(Y),
    )


def mxy_closed_form(s: StrongStats) -> int:
    """Edge count between X and Y predicted for Δ-regular graphs as
    (2-α-2β_X)Δ² - (4-α)Δ + 2, expanded over the integer counts."""
    D = s.delta
    return 2 * D * D - s.common * D - 2 * s.x_edges - 4 * D + s.common + 2


def mxy_regular_count(s: StrongStats) -> int:
    """Exact X–Y edge count in a Δ-regular graph: Σ_x d(x) minus twice the
    X-internal edges minus the |X| + αΔ edges back to u and v."""
    D = s.delta
    return D * s.x_size - 2 * s.x_edges - s.x_size - s.common


@dataclass(frozen=True)
class BoundVerdict:
    edge: int
    ds: int
    degree_bound: int
    me: int
    density_bound: float
    ds_ok: bool
    me_ok: bool
    ds_equality: bool | None  # None when G is not regular


def verify_bounds(G: Graph, e: int, stats: StrongStats | None = None) -> BoundVerdict:
    s = stats if stats is not None else strong_stats(G, e)
    bound = s.degree_bound()
    dens = s.density_bound()
    return BoundVerdict(
        edge=e, ds=s.ds, degree_bound=bound, me=s.me, density_bound=dens,
        ds_ok=s.ds <= bound, me_ok=s.me <= dens,
        ds_equality=(s.ds == bound) if G.is_regular() else None,
    )


CSV_HEADER = ("edge", "u", "v", "delta", "ds", "me", "alpha", "beta", "beta_x",
              "gamma", "mxy", "c4xy", "bound_ds_ok", "bound_me_ok")


def stats_csv(G: Graph, edges: Iterable[int] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for e in (range(G.m) if edges is None else edges):
        s = strong_stats(G, e)
        vd = verify_bounds(G, e, s)
        w.writerow([e, s.u, s.v, s.delta, s.ds, s.me, f"{s.alpha:.6f}", f"{s.beta:.6f}",
                    f"{s.beta_x:.6f}", f"{s.gamma_e:.6f}", s.mxy, s.c4xy,
                    str(vd.ds_ok).lower(), str(vd.me_ok).lower()])
    return buf.getvalue()


# ---------------------------------------------------------------- matrix route

def strong_profile(A: np.ndarray) -> dict[str, np.ndarray]:
    """Per-edge ds, m_e, |N(u)∩N(v)| and edges inside X from an adjacency
    matrix, via L = BᵀB - 2I and L² support. Independent of StrongIndex;
    edges are in lexicographic (u<v) order."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    iu, ju = np.nonzero(np.triu(A, 1))
    m = iu.size
    empty = np.zeros(0, dtype=np.int64)
    if m == 0:
        return {"u": empty, "v": empty, "ds": empty, "me": empty, "common": empty,
                "x_edges": empty, "delta": np.int64(A.sum(1).max(initial=0))}
    B = np.zeros((n, m), dtype=np.int64)
    B[iu, np.arange(m)] = 1
    B[ju, np.arange(m)] = 1
    L = B.T @ B
    np.fill_diagonal(L, 0)
    S = ((L + L @ L) > 0).astype(np.int64)
    np.fill_diagonal(S, 0)
    ds = S.sum(1)
    me = ((S @ S) * S).sum(1) // 2
    common = (A[iu] * A[ju]).sum(1)
    Xmask = ((A[iu] + A[ju]) > 0).astype(np.int64)
    Xmask[np.arange(m), iu] = 0
    Xmask[np.arange(m), ju] = 0
    x_edges = np.einsum("ei,ij,ej->e", Xmask, A, Xmask) // 2
    return {"u": iu, "v": ju, "ds": ds, "me": me, "common": common,
            "x_edges": x_edges, "delta": np.int64(A.sum(1).max())}


# ---------------------------------------------------------------- cliques

class CliqueBudgetExceeded(RuntimeError):
    def __init__(self, best_size: int, witness: frozenset[int], nodes: int):
        self.best_size = best_size
        self.witness = witness
        self.nodes = nodes
        super().__init__(f"node budget {nodes} exhausted; best clique so far {best_size}")


def strong_clique_exact(G: Graph, budget: int = 1_000_000) -> tuple[int, frozenset[int]]:
    """Maximum clique of L^2(G) by branch and bound.

    Candidates are ordered by decreasing L^2-degree (ties by edge id) and
    pruned with greedy colouring bounds, the usual MCQ scheme.
    """
    if G.m == 0:
        return 0, frozenset()
    idx = StrongIndex.of(G)
    order = sorted(range(G.m), key=lambda e: (-idx.degree(e), e))
    pos = {e: i for i, e in enumerate(order)}
    # adjacency re-indexed into the search order
    nbr = []
    for e in order:
        mask = 0
        for f in _bits(idx.nbr[e]):
            mask |= 1 << pos[f]
        nbr.append(mask)

    best: list[int] = [order[0]]
    nodes = 0

    def colour_bound(P: int) -> list[tuple[int, int]]:
        # greedy colour classes over P; returns (vertex, colour) in colour order
        out = []
        colour = 0
        U = P
        while U:
            colour += 1
            Q = U
            while Q:
                low = Q & -Q
                i = low.bit_length() - 1
                Q &= ~nbr[i] & ~low
                U &= ~low
                out.append((i, colour))
        return out

    def expand(R: list[int], P: int):
        nonlocal nodes, best
        nodes += 1
        if nodes > budget:
            raise CliqueBudgetExceeded(len(best), frozenset(best), budget)
        for i, c in reversed(colour_bound(P)):
            if len(R) + c <= len(best):
                return
            R.append(order[i])
            NP = P & nbr[i]
            if NP:
                expand(R, NP)
            elif len(R) > len(best):
                best = list(R)
            R.pop()
            P &= ~(1 << i)

    expand([], (1 << G.m) - 1)
    return len(best), frozenset(best)


def is_strong_clique(G: Graph, edges: Iterable[int]) -> bool:
    es = list(edges)
    return all(edge_distance_le1(G, es[i], es[j])
               for i in range(len(es)) for j in range(i + 1, len(es)))


def clique_bound_value(delta: float) -> float:
    """Upper bound on κ where κΔ² is the largest strong clique:
    3/(2Δ²) + sqrt(3 + 10/Δ + 9/(4Δ⁴))."""
    if delta < 1:
        raise ValueError("delta must be >= 1")
    if math.isinf(delta):
        return math.sqrt(3.0)
    return 3 / (2 * delta**2) + math.sqrt(3 + 10 / delta + 9 / (4 * delta**4))


def all_stats(G: Graph) -> list[StrongStats]:
    return [strong_stats(G, e) for e in range(G.m)]


def stats_dict(s: StrongStats) -> dict:
    d = asdict(s)
    d.update(alpha=s.alpha, beta=s.beta, beta_x=s.beta_x, gamma_e=s.gamma_e)
    return d
