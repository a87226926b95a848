"""Print the first N real algebraic numbers in height order with a timing."""

import argparse
import time
from dataclasses import dataclass

from eqlogic.algclass import enumerate_algebraic


@dataclass
class Config:
    count: int = 30
    digits: int = 12


def main(cfg: Config) -> None:
    t0 = time.perf_counter()
    items = enumerate_algebraic(cfg.count)
    elapsed = time.perf_counter() - t0
    for i, (p, r) in enumerate(items, 1):
        value = str(r.lo) if r.exact else f"{float(r.enclosure(64).mid):.{cfg.digits}g}"
        print(f"{i:4d}. {value:>20}   root of {p}")
    print(f"\n{cfg.count} numbers in {elapsed:.2f} s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=Config.count)
    main(Config(count=ap.parse_args().count))
