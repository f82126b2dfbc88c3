"""Brute-force m_uv for the Hadamard extremal graphs.

Checks every pair of strong neighbours of uv directly (shared endpoint or a
joining edge), without the bitset index. The printed values are the
regression constants frozen in tests/test_hadamard.py.

    python scripts/pin_extremal.py --k-max 6
"""

import argparse
import time

from strongcolor.hadamard import build_extremal_graph


def brute_m_uv(k: int) -> tuple[int, int]:
    G = build_extremal_graph(k)
    adj = G.neighbor_sets
    zone = [adj[a] | adj[b] | {a, b} for a, b in G.edges]

    def close(e, f):
        c, d = G.edges[f]
        return c in zone[e] or d in zone[e]

    e = G.edge_id(0, 1)
    N = [f for f in range(G.m) if f != e and close(e, f)]
    m = 0
    for i, f in enumerate(N):
        zf = zone[f]
        for g in N[i + 1:]:
            c, d = G.edges[g]
            if c in zf or d in zf:
                m += 1
    return G.max_degree, m


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k-min", type=int, default=2)
    ap.add_argument("--k-max", type=int, default=6)
    args = ap.parse_args()
    for k in range(args.k_min, args.k_max + 1):
        t = time.time()
        D, m = brute_m_uv(k)
        print(f"k={k} delta={D} m_uv={m} ratio={m / D**4:.6f} ({time.time() - t:.1f}s)", flush=True)


if __name__ == "__main__":
    main()
