"""Brute-force reference computations, deliberately independent of the package internals."""

import itertools
import math


def spc_columns(q, k):
    """All vectors of Z_q^k satisfying the parity check, in lexicographic order."""
    return [c for c in itertools.product(range(q), repeat=k) if sum(c[:-1]) % q == c[-1]]


def scan_blocks(T, q):
    """Blocks by scanning every entry of T."""
    blocks = {}
    for i, row in enumerate(T):
        for j, value in enumerate(row):
            blocks.setdefault((i, value), set()).add(j)
    for i in range(len(T)):
        for l in range(q):
            blocks.setdefault((i, l), set())
    return blocks


def scan_intersection(T, picks):
    """Columns j with T[i][j] == l for every (i, l) pick."""
    return {j for j in range(len(T[0])) if all(T[i][j] == l for i, l in picks)}


def brute_proposed_equations(q, k):
    """Equations from set operations alone: tuples with empty total intersection."""
    T = [list(row) for row in zip(*spc_columns(q, k))]
    blocks = scan_blocks(T, q)
    equations = []
    for labels in itertools.product(range(q), repeat=k):
        if set.intersection(*(blocks[i, labels[i]] for i in range(k))):
            continue
        terms = []
        for a in range(k):
            (point,) = set.intersection(*(blocks[i, labels[i]] for i in range(k) if i != a))
            terms.append((a * q + labels[a], point))
        equations.append(tuple(terms))
    return equations


def log2_ratio_exact(numerator: int, denominator: int) -> float:
    """log2 of a ratio of big integers without going through floats of the values."""
    return math.log2(numerator) - math.log2(denominator)


PROPOSED_GRID = [(q, k) for q in (2, 3, 4) for k in (2, 3, 4)]
MN_GRID = [(K, t) for K in range(2, 9) for t in range(1, K)]
