"""Sylvester–Hadamard set systems and the graphs whose strong
neighbourhoods nearly attain the 3/2·Δ⁴ density bound."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .graph import Graph
from .strong import StrongIndex

MAX_K = 12
MAX_REPORT_K = 7  # m_e bitsets grow as |E|²; k=7 already needs ~130 MB


def _guard(k: int, lo: int, hi: int = MAX_K):
    if not lo <= k <= hi:
        raise ValueError(f"k must lie in {lo}..{hi}, got {k}")


def sylvester_matrix(k: int) -> np.ndarray:
    """H_0 = [1], H_{k+1} = [[H, H], [H, -H]]."""
    _guard(k, 0)
    H = np.ones((1, 1), dtype=np.int8)
    for _ in range(k):
        H = np.block([[H, H], [H, -H]])
    return H


def hadamard_code(k: int) -> np.ndarray:
    """The 2·2^k binary codewords: rows of H_k (+1 -> 1) and complements."""
    rows = (sylvester_matrix(k) > 0).astype(np.int8)
    return np.vstack([rows, 1 - rows])


@dataclass(frozen=True)
class HadamardFamily:
    k: int
    n: int
    sets: tuple[tuple[int, ...], ...]

    def check_sizes(self) -> bool:
        return len(self.sets) == 2 * (self.n - 1) and all(len(s) == self.n // 2 for s in self.sets)

    def check_frequencies(self) -> bool:
        count = np.zeros(self.n, dtype=np.int64)
        for s in self.sets:
            count[list(s)] += 1
        return bool(np.all(count == self.n - 1))

    def check_intersections(self) -> bool:
        M = self.incidence()
        inter = M @ M.T
        off = inter[~np.eye(len(self.sets), dtype=bool)]
        return bool(np.all((off == 0) | (off == self.n // 4)))

    def incidence(self) -> np.ndarray:
        M = np.zeros((len(self.sets), self.n), dtype=np.int64)
        for j, s in enumerate(self.sets):
            M[j, list(s)] = 1
        return M


def hadamard_family(k: int) -> HadamardFamily:
    _guard(k, 2)
    n = 2**k
    sets = []
    for word in hadamard_code(k):
        w = int(word.sum())
        if w in (0, n):
            continue
        sets.append(tuple(np.flatnonzero(word).tolist()))
    return HadamardFamily(k=k, n=n, sets=tuple(sets))


def extremal_layout(k: int) -> dict[str, object]:
    """Vertex labels used by :func:`build_extremal_graph`."""
    n = 2**k
    return {"u": 0, "v": 1, "x": list(range(2, 2 + n)), "x_copy": list(range(2 + n, 2 + 2 * n)),
            "y": list(range(2 + 2 * n, 2 + 2 * n + 2 * n - 2))}


def build_extremal_graph(k: int) -> Graph:
    """u–v; u joined to x_1..x_n, v to the copies x'_1..x'_n; y_j joined to
    S_j and to its copy S'_j. Edge 0 is uv."""
    _guard(k, 2)
    fam = hadamard_family(k)
    lay = extremal_layout(k)
    u, v, xs, xc, ys = lay["u"], lay["v"], lay["x"], lay["x_copy"], lay["y"]
    edges = [(u, v)]
    edges += [(u, x) for x in xs]
    edges += [(v, x) for x in xc]
    for y, S in zip(ys, fam.sets):
        for i in S:
            edges.append((xs[i], y))
            edges.append((xc[i], y))
    return Graph(2 + 4 * fam.n - 2, tuple(edges))


@dataclass(frozen=True)
class ExtremalReport:
    k: int
    delta: int
    m_uv: int
    xy_edges: int

    @property
    def ratio(self) -> float:
        return self.m_uv / self.delta**4

    def csv_row(self) -> str:
        return f"{self.k},{self.delta},{self.m_uv},{self.ratio:.6f},{self.xy_edges}"


EXTREMAL_CSV_HEADER = "k,delta,m_uv,ratio,xy_edges"


def extremal_report(k: int) -> ExtremalReport:
    _guard(k, 2, MAX_REPORT_K)
    G = build_extremal_graph(k)
    lay = extremal_layout(k)
    X = set(lay["x"]) | set(lay["x_copy"])
    Y = set(lay["y"])
    xy = sum(1 for a, b in G.edges if (a in X and b in Y) or (a in Y and b in X))
    m_uv = StrongIndex.of(G).induced_edges(G.edge_id(lay["u"], lay["v"]))
    return ExtremalReport(k=k, delta=G.max_degree, m_uv=m_uv, xy_edges=xy)


def intersection_profile(fam: HadamardFamily) -> set[int]:
    return {len(set(a) & set(b)) for a, b in combinations(fam.sets, 2)}
