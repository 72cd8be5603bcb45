#!/usr/bin/env python3
"""
Brute-force Wick pairing: glue labeled half-edges on labeled vertices in
every possible way and sort the connected gluings by genus.

Half-edges at a vertex are cyclically ordered by their labels; faces are the
cycles of sigma o alpha, with sigma the rotation at each vertex and alpha
the pairing.
"""

import logging
from collections import Counter
from typing import Dict, Iterator, List, Sequence, Tuple

from scripts.counting.kappa import Key
from scripts.errors import UsageError

logger = logging.getLogger(__name__)

MAX_HALF_EDGES = 14


def _matchings(items: List[int]) -> Iterator[List[Tuple[int, int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        for tail in _matchings(rest[:i] + rest[i + 1:]):
            yield [(first, partner)] + tail


def _rotation(degrees: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Successor of each half-edge around its vertex, and the vertex it sits on."""
    successor, vertex_of = [], []
    start = 0
    for vertex, d in enumerate(degrees):
        for i in range(d):
            successor.append(start + (i + 1) % d)
            vertex_of.append(vertex)
        start += d
    return successor, vertex_of


def _is_connected(pairs, vertex_of, n_vertices: int) -> bool:
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = n_vertices
    for a, b in pairs:
        ra, rb = find(vertex_of[a]), find(vertex_of[b])
        if ra != rb:
            parent[ra] = rb
            components -= 1
    return components == 1


def _faces(successor: List[int], alpha: List[int]) -> int:
    seen = [False] * len(alpha)
    faces = 0
    for h in range(len(alpha)):
        if seen[h]:
            continue
        faces += 1
        while not seen[h]:
            seen[h] = True
            h = successor[alpha[h]]
    return faces


def wick_oracle(n_vector: Sequence[int], genus_max: int,
                valences: Sequence[int] = None) -> Dict[Key, int]:
    """
    kappa_k(n) for k <= genus_max by enumerating all perfect matchings.

    `valences` defaults to 2, 4, ..., 2 len(n_vector).
    """
    n_vector = tuple(int(n) for n in n_vector)
    valences = tuple(valences) if valences is not None else tuple(2 * (j + 1) for j in range(len(n_vector)))
    if len(valences) != len(n_vector):
        raise UsageError(f"exponent vector {n_vector} does not match valences {valences}")
    degrees = [v for v, n in zip(valences, n_vector) for _ in range(n)]
    half_edges = sum(degrees)
    if half_edges > MAX_HALF_EDGES:
        raise UsageError(f"{half_edges} half-edges exceed the enumeration bound {MAX_HALF_EDGES}")
    rows = {(k, n_vector): 0 for k in range(genus_max + 1)}
    if not degrees:
        return rows
    successor, vertex_of = _rotation(degrees)
    V, E = len(degrees), half_edges // 2
    tally: Counter = Counter()
    total = 0
    for pairs in _matchings(list(range(half_edges))):
        total += 1
        if not _is_connected(pairs, vertex_of, V):
            continue
        alpha = [0] * half_edges
        for a, b in pairs:
            alpha[a], alpha[b] = b, a
        F = _faces(successor, alpha)
        tally[(2 - V + E - F) // 2] += 1
    logger.debug("  %s: %d matchings, genus tally %s", n_vector, total, dict(tally))
    for k, count in tally.items():
        if k <= genus_max:
            rows[(k, n_vector)] = count
    return rows


if __name__ == '__main__':
    print("=" * 60)
    print("Wick pairing counts")
    print("=" * 60)
    for n in [(0, 1), (1, 0), (2, 0), (0, 2), (1, 1)]:
        print(f"  quartic {n}: {wick_oracle(n, 2)}")
    print(f"  sixtic (0,0,1): {wick_oracle((0, 0, 1), 1)}")
