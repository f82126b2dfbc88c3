"""Closed-form probabilities and bounds for the colouring procedure, and the
Monte Carlo experiments that check them.

All logarithms are natural. Asymptotic statements of the form
``(1 + o(1)) * f(r)`` are evaluated as ``f(r)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .coloring import NeighborhoodTally, edge_array, resolve_conflicts, UNCOLORED
from .graph import Graph, gnp, random_regular


# ---------------------------------------------------------------- formulas

def pair_retention_prob(C: int, r: int, k: int) -> float:
    """P[two non-adjacent degree-r vertices with k common neighbours get the
    same colour and both keep it]."""
    if C < 1 or not 0 <= k <= r:
        raise ValueError("need C >= 1 and 0 <= k <= r")
    return (1 / C) * (1 - 1 / (2 * C)) ** (2 * r - 2 * k) * (1 - 3 / (4 * C)) ** k


def triple_retention_prob(C: int, k1: int, k2: int, k3: int) -> float:
    """Same for three pairwise non-adjacent vertices; k_i counts vertices
    adjacent to exactly i of them."""
    if C < 1 or min(k1, k2, k3) < 0:
        raise ValueError("need C >= 1 and non-negative k's")
    return (1 / C**2) * (1 - 1 / (2 * C)) ** k1 * (1 - 3 / (4 * C)) ** k2 * (1 - 7 / (8 * C)) ** k3


def analytic_pt_bounds(delta: float, gamma: float, r: float) -> tuple[float, float]:
    """Leading-order lower bound on E[P_u] and upper bound on E[T_u]."""
    g = 1 - gamma
    pu = delta * r / (2 * g) * math.exp(-1 / g)
    tu = delta**1.5 * r / (6 * g * g) * math.exp(-7 / (8 * g))
    return pu, tu


def gamma_rhs(gamma: float, delta: float) -> float:
    g = 1 - gamma
    return delta / (2 * g) * math.exp(-1 / g) - delta**1.5 / (6 * g * g) * math.exp(-7 / (8 * g))


def gamma_condition_holds(gamma: float, delta: float) -> bool:
    if not (0 < gamma < 1 and 0 < delta < 1):
        raise ValueError("gamma and delta must lie in (0, 1)")
    return gamma < gamma_rhs(gamma, delta)


def gamma_margin(gamma: float, delta: float) -> float:
    return gamma_rhs(gamma, delta) - gamma


class BracketError(ValueError):
    pass


def max_gamma(delta: float, tol: float = 1e-9) -> float:
    """Root of gamma_rhs(γ, δ) - γ on (0, 1) by bisection."""
    lo, hi = 0.0, 1.0 - 1e-12
    f = lambda g: gamma_rhs(g, delta) - g  # noqa: E731
    if not (f(lo) > 0 > f(hi)):
        raise BracketError(f"no sign change for delta={delta}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo


def approx_gamma(delta: float) -> float:
    return 0.1827 * delta - 0.0778 * delta**1.5


def lll_check(p: float, d: float) -> bool:
    if not 0 <= p < 1 or d < 0:
        raise ValueError("need 0 <= p < 1 and d >= 0")
    return 4 * p * d <= 1


@dataclass(frozen=True)
class TailBound:
    value: float
    applicable: bool  # t > 50 c sqrt(s); the bound says nothing otherwise


def talagrand_tail_bound(t: float, c: float, s: float, p_xi: float) -> TailBound:
    """min(1, 4 exp(-t²/(16c²s)) + 4 P[Ξ])."""
    if c < 1 or s < 1 or not 0 <= p_xi <= 1:
        raise ValueError("need c >= 1, s >= 1, 0 <= p_xi <= 1")
    val = 4 * math.exp(-t * t / (16 * c * c * s)) + 4 * p_xi
    return TailBound(min(1.0, val), t > 50 * c * math.sqrt(s))


def concentration_params(r: float) -> tuple[float, float]:
    """(s, c) = (3r, log² r) used for P_u."""
    return 3 * r, math.log(r) ** 2


def pu_deviation_threshold(r: float) -> float:
    return math.sqrt(r) * math.log(r) ** 3


def pu_tail_bound(r: float) -> float:
    """r^(-(1/2) log log r), capped at 1 (it exceeds 1 for r < e^e)."""
    ll = math.log(math.log(r)) if r > 1 else -math.inf
    if ll <= 0:
        return 1.0
    return min(1.0, r ** (-0.5 * ll))


def exceptional_prob_bound(r: float, gamma: float) -> float:
    """r² (e / ((1-γ) log r))^(log r), capped at 1."""
    L = math.log(r)
    return min(1.0, r * r * (math.e / ((1 - gamma) * L)) ** L)


def median_of_samples(samples: Sequence[float]) -> float:
    """sup{t : #(X <= t)/N <= 1/2} of the empirical distribution, i.e. the
    sorted value at 0-based index N // 2."""
    xs = sorted(samples)
    if not xs:
        raise ValueError("median of empty sample")
    return xs[len(xs) // 2]


# ---------------------------------------------------------------- Monte Carlo

DEFAULT_THRESHOLDS = (0.0, 1.0, 2.0, 4.0, 8.0)
CHUNK = 20_000


@dataclass
class TrialReport:
    trials: int
    mean_pu: float
    var_pu: float
    mean_tu: float
    var_tu: float
    mean_saved: float
    tail_freq: dict[float, float]
    exceptional_freq: float
    u: int = 0
    C: int = 0
    seed: int = 0
    r: float = 0.0
    median_pu: float = 0.0
    deviation_threshold: float = 0.0
    tail_at_threshold: float = 0.0
    tail_bound: float = 1.0
    saving_violations: int = 0
    improper_trials: int = 0
    samples: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d.pop("samples")
        d["tail_freq"] = {repr(float(t)): f for t, f in self.tail_freq.items()}
        return d


def _chunk_sizes(trials: int, chunk: int) -> list[int]:
    full, rest = divmod(trials, chunk)
    return [chunk] * full + ([rest] if rest else [])


def _run_chunk(H: Graph, tally: NeighborhoodTally, C: int, master_seed: int, index: int, size: int):
    rng = np.random.default_rng(np.random.SeedSequence([int(master_seed), 0x6D63, index]))
    initial = rng.integers(1, C + 1, size=(size, H.n), dtype=np.int64)
    orientation = rng.integers(0, 2, size=(size, H.m), dtype=np.int8).astype(bool)
    ends = edge_array(H)
    colors = resolve_conflicts(ends, initial, orientation)
    if ends.shape[0]:
        a, b = colors[:, ends[:, 0]], colors[:, ends[:, 1]]
        improper = ((a == b) & (a != UNCOLORED)).any(1)
    else:
        improper = np.zeros(size, dtype=bool)
    return (tally.pu(colors), tally.tu(colors), tally.saved(colors),
            tally.max_class(initial), improper)


def run_trials(H: Graph, u: int, C: int, trials: int, master_seed: int = 0,
               r_for_xi: float | None = None, thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
               threads: int = 1, chunk: int = CHUNK) -> TrialReport:
    """Repeated colouring trials scored at vertex u.

    Trials are split into fixed-size chunks with their own derived streams,
    so results do not depend on ``threads``.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    tally = NeighborhoodTally(H, u)
    r = float(r_for_xi if r_for_xi is not None else max(H.max_degree, 1))
    sizes = _chunk_sizes(trials, chunk)
    work = [(H, tally, C, master_seed, i, s) for i, s in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda a: _run_chunk(*a), work))
    else:
        parts = [_run_chunk(*a) for a in work]
    pu, tu, saved, maxcls, improper = (np.concatenate(x) for x in zip(*parts))

    ddof = 1 if trials > 1 else 0
    mean_pu = float(pu.mean())
    dev = np.abs(pu - mean_pu)
    tail = {float(t): float((dev >= t).mean()) for t in thresholds}
    thr = pu_deviation_threshold(r) if r > 1 else 0.0
    return TrialReport(
        trials=trials, mean_pu=mean_pu, var_pu=float(pu.var(ddof=ddof)),
        mean_tu=float(tu.mean()), var_tu=float(tu.var(ddof=ddof)),
        mean_saved=float(saved.mean()), tail_freq=tail,
        exceptional_freq=float((maxcls > math.log(r)).mean()) if r > 0 else 0.0,
        u=u, C=C, seed=int(master_seed), r=r, median_pu=float(median_of_samples(pu.tolist())),
        deviation_threshold=thr, tail_at_threshold=float((dev >= thr).mean()),
        tail_bound=pu_tail_bound(r) if r > 1 else 1.0,
        saving_violations=int((saved < pu - tu).sum()), improper_trials=int(improper.sum()),
        samples={"pu": pu, "tu": tu, "saved": saved},
    )


# ---------------------------------------------------------------- gadgets

def circulant(n: int, jumps: Sequence[int]) -> Graph:
    edges = set()
    for i in range(n):
        for s in jumps:
            j = (i + s) % n
            if i != j:
                edges.add((min(i, j), max(i, j)))
    return Graph(n, tuple(sorted(edges)))


def _jump_sets(n: int, r: int):
    half = n // 2
    cand = list(range(1, half + 1))
    for size in range(1, len(cand) + 1):
        for S in combinations(cand, size):
            deg = sum(1 if (n % 2 == 0 and s == half) else 2 for s in S)
            if deg == r:
                yield S


def retention_gadget(r: int, k: int, max_n: int = 40) -> tuple[Graph, int, int]:
    """An r-regular circulant host with non-adjacent v=0, w having exactly k
    common neighbours. Deterministic: smallest n, then first jump set."""
    for n in range(r + 2, max_n + 1):
        for S in _jump_sets(n, r):
            H = circulant(n, S)
            adj = H.neighbor_sets
            assert all(len(a) == r for a in adj)
            for w in range(1, n):
                if w not in adj[0] and len(adj[0] & adj[w]) == k:
                    return H, 0, w
    raise ValueError(f"no circulant gadget for r={r}, k={k} up to n={max_n}")


def triple_profile(H: Graph, triple: Sequence[int]) -> tuple[int, int, int]:
    """(k1, k2, k3): vertices adjacent to exactly 1, 2, 3 of the triple."""
    adj = H.neighbor_sets
    T = set(triple)
    counts = [0, 0, 0, 0]
    for z in range(H.n):
        if z in T:
            continue
        counts[len(adj[z] & T)] += 1
    return counts[1], counts[2], counts[3]


def first_independent_triple(H: Graph, anchor: int = 0) -> tuple[int, int, int]:
    adj = H.neighbor_sets
    others = [w for w in range(H.n) if w != anchor and w not in adj[anchor]]
    for a, b in combinations(others, 2):
        if b not in adj[a]:
            return (anchor, a, b)
    raise ValueError("no pairwise non-adjacent triple through anchor")


def estimate_retention(H: Graph, group: Sequence[int], C: int, trials: int,
                       master_seed: int = 0, chunk: int = 200_000) -> int:
    """Number of trials in which all vertices of ``group`` end with one
    common colour."""
    ends = edge_array(H)
    g = np.asarray(group, dtype=np.int64)
    hits = 0
    for i, size in enumerate(_chunk_sizes(trials, chunk)):
        rng = np.random.default_rng(np.random.SeedSequence([int(master_seed), 0x7274, i]))
        initial = rng.integers(1, C + 1, size=(size, H.n), dtype=np.int64)
        orientation = rng.integers(0, 2, size=(size, H.m), dtype=np.int8).astype(bool)
        col = resolve_conflicts(ends, initial, orientation)[:, g]
        ok = (col[:, 0] != UNCOLORED) & np.all(col == col[:, :1], axis=1)
        hits += int(ok.sum())
    return hits


# ---------------------------------------------------------------- triangles

def count_triangles(G: Graph) -> int:
    """Triangles via sorted-adjacency intersection, each counted at its
    lexicographically smallest edge."""
    adj = G.adjacency
    total = 0
    for a, b in G.edges:
        na, nb = adj[a], adj[b]
        i = j = 0
        while i < len(na) and j < len(nb):
            x, y = na[i], nb[j]
            if x == y:
                if x > b:
                    total += 1
                i += 1
                j += 1
            elif x < y:
                i += 1
            else:
                j += 1
    return total


def expected_triangles(n: int, p: float) -> float:
    return math.comb(n, 3) * p**3


def triangle_samples(n: int, p: float, trials: int, master_seed: int = 0) -> list[int]:
    return [count_triangles(gnp(n, p, seed=np.random.SeedSequence([int(master_seed), i])))
            for i in range(trials)]


def triangle_experiment(n: int, p: float, trials: int, master_seed: int = 0) -> tuple[float, float, float]:
    """(sample mean, sample variance, C(n,3) p³) over ``trials`` G(n,p) draws."""
    if n < 3 or not 0 <= p <= 1 or trials < 1:
        raise ValueError("need n >= 3, 0 <= p <= 1, trials >= 1")
    xs = np.asarray(triangle_samples(n, p, trials, master_seed), dtype=np.float64)
    var = float(xs.var(ddof=1)) if trials > 1 else 0.0
    return float(xs.mean()), var, expected_triangles(n, p)


# ---------------------------------------------------------------- reporting

TAIL_TABLE_HEADER = ("r", "C", "trials", "mean_pu", "sd_pu", "threshold", "empirical_tail",
                     "asymptotic_bound", "tail_3sd", "talagrand_applicable")


def tail_table(degrees: Sequence[int] = (8, 16, 32), gamma: float = 0.035, trials: int = 20_000,
               master_seed: int = 0, n_factor: int = 5) -> list[tuple]:
    """Empirical P_u deviation tails on random r-regular hosts next to the
    r^(-(1/2) log log r) bound and the Talagrand applicability flag for
    t = sqrt(r) log³ r, s = 3r, c = log² r. Reported, never asserted."""
    rows = []
    for i, r in enumerate(degrees):
        H = random_regular(n_factor * r, r, seed=int(master_seed) * 1000 + r)
        C = math.ceil((1 - gamma) * r)
        rep = run_trials(H, 0, C, trials, master_seed=int(master_seed) + i, r_for_xi=r)
        s, c = concentration_params(r)
        t = pu_deviation_threshold(r)
        sd = math.sqrt(rep.var_pu)
        dev = np.abs(rep.samples["pu"] - rep.mean_pu)
        rows.append((r, C, trials, rep.mean_pu, sd, t, rep.tail_at_threshold,
                     pu_tail_bound(r), float((dev >= 3 * sd).mean()), t > 50 * c * math.sqrt(s)))
    return rows
