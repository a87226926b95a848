"""Solve the headline equations and print solution sets, traces and timings."""

import argparse
import time
from dataclasses import dataclass

from eqlogic import SolveConfig, solve
from eqlogic.cli import render_solution_text
from eqlogic.parse import parse_equation

EXAMPLES = [
    ("sqrt(x) + sqrt(2*x + 1) = 3", "[0,inf)"),
    ("exp(x) = x + 2", None),
    ("exp(x) = 1/2", None),
    ("x^5 - x - 1 = 0", None),
    ("x^6 - x^3 - 1 = 0", None),
    ("exp(x) = exp(x)", None),
    ("x*exp(x) = 1", None),
    ("ln(x) = 1/x", None),
    ("sin(x) = x/2", None),
]


@dataclass
class Config:
    precision: int = 256
    show_trace: bool = True


def main(cfg: Config) -> None:
    for text, dom in EXAMPLES:
        eq = parse_equation(text, dom)
        t0 = time.perf_counter()
        ss, trace = solve(eq, SolveConfig(precision=cfg.precision))
        ms = 1000 * (time.perf_counter() - t0)
        print(f"{text}" + (f"  on {dom}" if dom else "") + f"   [{ms:.0f} ms]")
        if cfg.show_trace:
            for i, step in enumerate(trace.steps, 1):
                print(f"    {i}. {step}")
        print("    " + render_solution_text(ss, cfg.precision))
        print()


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--precision", type=int, default=Config.precision)
    ap.add_argument("--no-trace", action="store_true")
    a = ap.parse_args()
    main(Config(precision=a.precision, show_trace=not a.no_trace))
