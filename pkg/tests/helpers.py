"""Independent oracles shared by the test suites.

Nothing here goes through the package's reduction code: faces are generated
with itertools and ranks come from plain dense elimination.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction


def all_faces(maximal):
    faces = set()
    for s in maximal:
        s = tuple(sorted(s))
        for r in range(1, len(s) + 1):
            faces.update(itertools.combinations(s, r))
    return faces


def _rank(rows, field):
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][c]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                if field == "gf2":
                    rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[rank])]
                else:
                    f = Fraction(rows[i][c]) / p
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def naive_betti(maximal, field="gf2"):
    faces = all_faces(maximal)
    if not faces:
        return []
    by_dim = {}
    for f in faces:
        by_dim.setdefault(len(f) - 1, []).append(f)
    d = max(by_dim)
    idx = {k: {s: i for i, s in enumerate(sorted(v))} for k, v in by_dim.items()}
    ranks = {}
    for k in range(1, d + 1):
        rows = [[0] * len(idx[k]) for _ in idx[k - 1]]
        for s, j in idx[k].items():
            for i in range(k + 1):
                face = s[:i] + s[i + 1:]
                rows[idx[k - 1][face]][j] = 1 if field == "gf2" else (-1) ** i
        ranks[k] = _rank(rows, field)
    return [len(idx[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in range(d + 1)]


def random_complex(rng: random.Random, max_vertices: int = 8, max_dim: int = 3):
    n = rng.randint(1, max_vertices)
    count = rng.randint(1, 7)
    simplices = []
    for _ in range(count):
        k = rng.randint(0, min(max_dim, n - 1))
        simplices.append(tuple(sorted(rng.sample(range(n), k + 1))))
    used = sorted({v for s in simplices for v in s})
    relabel = {v: i for i, v in enumerate(used)}
    return [tuple(relabel[v] for v in s) for s in simplices]


def random_complexes(count: int = 100, seed: int = 20240611):
    rng = random.Random(seed)
    return [random_complex(rng) for _ in range(count)]
