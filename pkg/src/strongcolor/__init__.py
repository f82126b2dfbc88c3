"""Strong edge colouring toolkit: L^2(G) structure, Hadamard extremal
graphs, randomised colouring with orientation-based conflict resolution and
Monte Carlo checks of the accompanying probability formulas."""

__version__ = "0.1.0"
