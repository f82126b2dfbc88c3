from itertools import combinations

from hypothesis import settings, strategies as st

from strongcolor.graph import (Graph, blowup_c5, complete, complete_bipartite, cycle, gnp,
                               petersen, random_regular, star)

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=9):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, tuple(p for p, k in zip(pairs, keep) if k))


def corpus():
    """Named graphs used across modules."""
    return {
        "K2": complete(2),
        "K4": complete(4),
        "K5": complete(5),
        "C5": cycle(5),
        "C6": cycle(6),
        "P3": Graph(3, ((0, 1), (1, 2))),
        "2K2": Graph(4, ((0, 1), (2, 3))),
        "star3": star(3),
        "star4": star(4),
        "K33": complete_bipartite(3, 3),
        "K24": complete_bipartite(2, 4),
        "petersen": petersen(),
        "blowup2": blowup_c5(2),
        "blowup3": blowup_c5(3),
        "rr12_4": random_regular(12, 4, seed=3),
        "rr24_6": random_regular(24, 6, seed=5),
        "gnp15": gnp(15, 0.35, seed=11),
        "gnp20": gnp(20, 0.2, seed=12),
    }


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
