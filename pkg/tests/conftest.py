"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the package's linear algebra and
enumeration internals: quadratic forms are evaluated directly, inverses
come from a local Gaussian elimination, and search boxes are certified by
the Cauchy-Schwarz bound x_i^2 <= (G^-1)_ii * |x|_G^2.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import isqrt

from tropmoment.metricgraph import Edge, MetricGraph, make_graph

# ---------------------------------------------------------------------------
# independent oracle helpers


def oracle_qform(gram, x):
    g = len(gram)
    return sum(
        Fraction(gram[i][j]) * x[i] * x[j] for i in range(g) for j in range(g)
    )


def oracle_inverse_diag(gram):
    """Diagonal of G^-1 by plain Gauss-Jordan over Fractions."""
    g = len(gram)
    aug = [
        [Fraction(gram[i][j]) for j in range(g)]
        + [Fraction(1 if j == i else 0) for j in range(g)]
        for i in range(g)
    ]
    for col in range(g):
        pivot_row = next(r for r in range(col, g) if aug[r][col] != 0)
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        aug[col] = [v / pivot for v in aug[col]]
        for r in range(g):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[i][g + i] for i in range(g)]


def _box_ranges(gram, point, dist_sq):
    """Certified integer ranges containing every u with |point-u|^2 <= dist_sq."""
    inv_diag = oracle_inverse_diag(gram)
    ranges = []
    for i, p in enumerate(point):
        bound = inv_diag[i] * dist_sq
        radius = isqrt(bound.numerator // bound.denominator) + 1
        lo = (p.numerator // p.denominator) - radius
        hi = lo + 2 * radius + 1
        ranges.append(range(lo, hi + 1))
    return ranges


def oracle_cvp(gram, point):
    """All closest lattice vectors to ``point`` by certified box search."""
    g = len(gram)
    point = [Fraction(c) for c in point]
    rounded = tuple(
        (2 * p.numerator + p.denominator) // (2 * p.denominator) for p in point
    )
    d0 = oracle_qform(gram, [p - r for p, r in zip(point, rounded)])
    best, sols = None, []
    for u in product(*_box_ranges(gram, point, d0)):
        d = oracle_qform(gram, [p - c for p, c in zip(point, u)])
        if best is None or d < best:
            best, sols = d, [u]
        elif d == best:
            sols.append(u)
    return best, sorted(sols)


def oracle_relevant(gram):
    """Voronoi relevant vectors by the unique +-pair coset criterion."""
    g = len(gram)
    out = []
    for parity in product((0, 1), repeat=g):
        if not any(parity):
            continue
        target = [Fraction(-p, 2) for p in parity]
        best, sols = oracle_cvp(gram, target)
        if len(sols) == 2:
            out.extend(
                tuple(parity[i] + 2 * u[i] for i in range(g)) for u in sols
            )
    return sorted(out)


def oracle_shortest(gram):
    """All nonzero lattice vectors of minimal norm (box certified by the
    smallest diagonal entry, which the minimum cannot exceed)."""
    g = len(gram)
    cap = min(Fraction(gram[i][i]) for i in range(g))
    inv_diag = oracle_inverse_diag(gram)
    ranges = []
    for i in range(g):
        bound = inv_diag[i] * cap
        radius = isqrt(bound.numerator // bound.denominator) + 1
        ranges.append(range(-radius, radius + 1))
    best, sols = None, []
    for u in product(*ranges):
        if not any(u):
            continue
        d = oracle_qform(gram, list(u))
        if best is None or d < best:
            best, sols = d, [u]
        elif d == best:
            sols.append(u)
    return best, sorted(sols)


# ---------------------------------------------------------------------------
# named graph fixtures


def circle(ell) -> MetricGraph:
    return make_graph(1, [(0, 0, ell)])


def segment(ell) -> MetricGraph:
    return make_graph(2, [(0, 1, ell)])


def star3(a, b, c) -> MetricGraph:
    return make_graph(4, [(0, 1, a), (0, 2, b), (0, 3, c)])


def theta_graph(a, b, c) -> MetricGraph:
    return make_graph(2, [(0, 1, a), (0, 1, b), (0, 1, c)])


def k4(lengths=None) -> MetricGraph:
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    lengths = lengths or [1] * 6
    return make_graph(4, [(t, h, l) for (t, h), l in zip(pairs, lengths)])


def two_loops_bridge(p, r, b) -> MetricGraph:
    return make_graph(2, [(0, 0, p), (1, 1, r), (0, 1, b)])


def dumbbell() -> MetricGraph:
    # loops at the two ends of a two-edge bar
    return make_graph(
        3,
        [
            (0, 0, Fraction(5, 2)),
            (2, 2, Fraction(7, 3)),
            (0, 1, Fraction(1, 2)),
            (1, 2, Fraction(3, 4)),
        ],
    )


def named_graphs() -> dict[str, MetricGraph]:
    return {
        "circle": circle(12),
        "segment": segment(3),
        "star": star3(1, Fraction(1, 2), Fraction(7, 3)),
        "theta": theta_graph(1, 2, 3),
        "k4": k4([1, 2, Fraction(1, 2), 3, Fraction(5, 3), 1]),
        "two_loops_bridge": two_loops_bridge(3, Fraction(5, 4), 2),
        "dumbbell": dumbbell(),
    }


# ---------------------------------------------------------------------------
# seeded generators


def random_rational(rng: random.Random, max_num=12, max_den=12) -> Fraction:
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def random_pd_gram(rng: random.Random, max_rank=3):
    g = rng.randint(1, max_rank)
    while True:
        a = [[rng.randint(-3, 3) for _ in range(g)] for _ in range(g)]
        det = _det_int(a)
        if det != 0:
            break
    scale = random_rational(rng, 6, 6)
    return [
        [scale * sum(a[k][i] * a[k][j] for k in range(g)) for j in range(g)]
        for i in range(g)
    ]


def _det_int(a):
    n = len(a)
    if n == 1:
        return a[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        total += (-1) ** j * a[0][j] * _det_int(minor)
    return total


def random_point(rng: random.Random, g: int, den=12):
    return tuple(
        Fraction(rng.randint(-3 * den, 3 * den), rng.randint(1, den))
        for _ in range(g)
    )


def random_connected_multigraph(rng: random.Random, max_edges=6) -> MetricGraph:
    edge_count = rng.randint(1, max_edges)
    n = rng.randint(1, edge_count + 1)
    edges = []
    for v in range(1, n):
        edges.append(Edge(rng.randrange(v), v, random_rational(rng)))
    while len(edges) < edge_count:
        edges.append(Edge(rng.randrange(n), rng.randrange(n), random_rational(rng)))
    return MetricGraph(vertex_count=n, edges=tuple(edges))
