"""Random-equation sweeps: rewrite falsification and solver soundness.

Uses the test-suite oracles (tests/falsify.py, tests/soundness.py).
"""

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import falsify  # noqa: E402
import soundness  # noqa: E402


@dataclass
class Config:
    rewrites: int = 10_000
    equations: int = 1_000
    seed: int = 0


def main(cfg: Config) -> int:
    t0 = time.perf_counter()
    fr = falsify.run(cfg.rewrites, cfg.seed)
    print(f"rewrite steps: {fr.applications} applications, {fr.checked_points} grid checks, "
          f"{len(fr.violations)} violations  [{time.perf_counter() - t0:.1f} s]")
    for rule, n in sorted(fr.by_rule.items()):
        print(f"    {rule:<28} {n}")
    t0 = time.perf_counter()
    sr = soundness.run(cfg.equations, cfg.seed)
    print(f"solver: {sr.equations} equations {dict(sorted(sr.kinds.items()))}, "
          f"{len(sr.problems)} problems  [{time.perf_counter() - t0:.1f} s]")
    for p in sr.problems[:10]:
        print("    ", p)
    return 1 if fr.violations or sr.problems else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rewrites", type=int, default=Config.rewrites)
    ap.add_argument("--equations", type=int, default=Config.equations)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    sys.exit(main(Config(a.rewrites, a.equations, a.seed)))
