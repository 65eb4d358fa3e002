"""Configurations shared by the predimension tests and the acceptance suite."""
import itertools
import random
from fractions import Fraction

from pexcalc.ideal import Ideal
from pexcalc.predim import Configuration, ConfigurationError, kernel_demo, x_ring, y_ring


def random_configuration(rng: random.Random, max_n: int = 4, height: int = 2) -> Configuration:
    """A consistent configuration with random algebraic, linear and image relations."""
    while True:
        n = rng.randint(1, max_n)
        X, Y = x_ring(n), y_ring(n)
        xs, ys = X.gens(), Y.gens()
        xg, yg, rels, kern = [], [], [], set()
        for _ in range(rng.randint(0, 2)):
            i, j = rng.randrange(n), rng.randrange(n)
            kind = rng.randrange(4)
            if kind == 0 and i != j:
                xg.append(xs[i] - xs[j] ** 2)
            elif kind == 1 and i != j:
                xg.append(xs[i] * xs[j] - rng.randint(1, 3))
            elif kind == 2:
                xg.append(xs[i] - Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
            elif n > 1:
                row = [rng.randint(-2, 2) for _ in range(n)]
                if any(row):
                    rels.append(tuple(row))
        for _ in range(rng.randint(0, 2)):
            i, j = rng.randrange(n), rng.randrange(n)
            kind = rng.randrange(4)
            if kind == 0 and i != j:
                yg.append(ys[i] - ys[j] ** 2)
            elif kind == 1 and i != j:
                yg.append(ys[i] * ys[j] - 2)
            elif kind == 2:
                yg.append(ys[i] - rng.choice([2, 3, Fraction(1, 2)]))
            else:
                yg.append(ys[i] - ys[j] - 1 if i != j else ys[i] + 1)
        if rng.random() < 0.2:
            kern.add(rng.randrange(n))
        try:
            return Configuration(n, Ideal(X, xg), Ideal(Y, yg), tuple(rels), frozenset(kern), height)
        except ConfigurationError:
            continue


def random_spec(rng: random.Random, n: int):
    """Index subset or explicit rows, possibly empty."""
    if rng.random() < 0.6:
        return [i for i in range(n) if rng.random() < 0.5]
    k = rng.randint(1, n)
    return [[rng.randint(-2, 2) for _ in range(n)] for _ in range(k)]


def toy_structures():
    """Small configurations with delta >= 0 on every subspace (checked by the tests)."""
    out = {}
    X2, Y2 = x_ring(2), y_ring(2)
    x1, x2 = X2.gens()
    y1, y2 = Y2.gens()
    out["free-pair"] = Configuration(2, Ideal(X2, []), Ideal(Y2, []), height=2)
    out["kernel-2"] = kernel_demo(2, height=2)
    out["image-shift"] = Configuration(2, Ideal(X2, []), Ideal(Y2, [y2 - y1 - 1]), height=2)
    out["parabola"] = Configuration(2, Ideal(X2, [x2 - x1 ** 2]), Ideal(Y2, []), height=2)
    X3, Y3 = x_ring(3), y_ring(3)
    a, b, c = X3.gens()
    u, v, w = Y3.gens()
    out["sum-line"] = Configuration(
        3, Ideal(X3, []), Ideal(Y3, [w - u - v]), ((1, 1, -1),), height=2
    )
    out["square-both"] = Configuration(2, Ideal(X2, [x2 - x1 ** 2]), Ideal(Y2, [y2 - y1 ** 2]), height=2)
    out["square-plus-free"] = Configuration(
        3, Ideal(X3, [c - a ** 2]), Ideal(Y3, [w - u ** 2]), height=2
    )
    return out


def pool(n: int):
    """Generators and their height-1 combinations of two generators, as rows."""
    vecs = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        for s in (1, -1):
            v = [0] * n
            v[i], v[j] = 1, s
            vecs.append(tuple(v))
    return vecs
