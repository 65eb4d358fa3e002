"""Normality and freeness verdicts of small random pairs at several height bounds."""
import argparse
import random
from collections import Counter
from dataclasses import dataclass

from pexcalc.pairs import PairError, VarietyPair, freeness, normal_check
from pexcalc.predim import x_ring, y_ring


@dataclass
class Config:
    samples: int = 40
    heights: tuple = (1, 2, 3)
    seed: int = 0


def random_pair(rng):
    X, Y = x_ring(2), y_ring(2)
    (x1, x2), (y1, y2) = X.gens(), Y.gens()
    v = rng.choice([[], [x2 - x1 ** 2], [x1 * x2 - 1], [x1 - rng.randint(-2, 2), x2], [x1 + 2 * x2 - 1]])
    w = rng.choice([[], [y2 - y1 - 1], [y2 - y1 ** 2 - 1], [y1 - 2, y2 - 3], [y1 * y2 - 2]])
    return VarietyPair.from_polys(2, v, w)


def survey(cfg: Config):
    rng = random.Random(cfg.seed)
    tally = Counter()
    for _ in range(cfg.samples):
        try:
            p = random_pair(rng)
        except PairError:
            continue
        row = tuple(normal_check(p, H).normal for H in cfg.heights)
        tally[(row, freeness(p, max(cfg.heights)).free)] += 1
    return tally


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    cfg = Config(a.samples, seed=a.seed)
    for (row, free), count in sorted(survey(cfg).items()):
        marks = " ".join(f"H={H}:{'N' if v else '-'}" for H, v in zip(cfg.heights, row))
        print(f"{count:4d}  {marks}  free={free}")
