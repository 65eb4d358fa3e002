"""Check delta = 0 on kernel-demo configurations over index subsets and small sublattices."""
import argparse
import itertools
import time
from dataclasses import dataclass

from pexcalc.lattice import enumerate_sublattices
from pexcalc.predim import delta, kernel_demo


@dataclass
class Config:
    max_size: int = 8
    height: int = 3
    full_upto: int = 3  # enumerate every sublattice for sizes up to this


def specs(N, cfg):
    yield from (list(S) for k in range(N + 1) for S in itertools.combinations(range(N), k))
    if N <= cfg.full_upto:
        for k in range(1, N + 1):
            for L in enumerate_sublattices(N, k, cfg.height):
                yield L.matrix()
        return
    # sublattices inside coordinate planes
    for i, j in itertools.combinations(range(N), 2):
        for k in (1, 2):
            for L in enumerate_sublattices(2, k, cfg.height):
                rows = []
                for r in L.basis:
                    v = [0] * N
                    v[i], v[j] = r
                    rows.append(v)
                yield rows


def run(cfg: Config):
    for N in range(1, cfg.max_size + 1):
        t0 = time.perf_counter()
        c = kernel_demo(N, cfg.height)
        cache = {}
        values = [delta(c, s, cache) for s in specs(N, cfg)]
        bad = sum(v != 0 for v in values)
        print(f"N={N}  specs={len(values)}  nonzero={bad}  {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=Config.max_size)
    ap.add_argument("--height", type=int, default=Config.height)
    ap.add_argument("--full-upto", type=int, default=Config.full_upto)
    a = ap.parse_args()
    run(Config(a.max_size, a.height, a.full_upto))
