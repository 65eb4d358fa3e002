"""Success rate of iterated generic cuts from the plane against the torus."""
import argparse
import time
from dataclasses import dataclass

from pexcalc.pairs import PairError, VarietyPair, cut


@dataclass
class Config:
    seeds: int = 100
    height: int = 3
    n: int = 2


def sweep(cfg: Config):
    ok, failures = 0, []
    for seed in range(cfg.seeds):
        p = VarietyPair.from_polys(cfg.n)
        try:
            while p.excess > 0:
                p, rep = cut(p, seed, cfg.height, allow_curve=True)
                if not rep.ok:
                    raise PairError(f"cut flagged at excess {rep.excess_before}")
            ok += 1
        except PairError as e:
            failures.append((seed, str(e)))
    return ok, failures


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=Config.seeds)
    ap.add_argument("--height", type=int, default=Config.height)
    ap.add_argument("--n", type=int, default=Config.n)
    a = ap.parse_args()
    cfg = Config(a.seeds, a.height, a.n)
    t0 = time.perf_counter()
    ok, failures = sweep(cfg)
    print(f"{ok}/{cfg.seeds} seeds reached excess 0 without retry ({time.perf_counter() - t0:.1f}s)")
    for seed, msg in failures:
        print(f"  seed {seed}: {msg}")
