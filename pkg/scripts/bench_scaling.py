"""Wall time and state counts for k-decisions as n grows; CSV to stdout or a file."""
import argparse
import sys
from dataclasses import dataclass, field

from connpw.workbench.bench import run_bench
from connpw.workbench.generators import GeneratorSpec


@dataclass
class BenchConfig:
    sizes: list = field(default_factory=lambda: [10, 14, 18, 22, 26])
    ks: list = field(default_factory=lambda: [2, 3])
    tree_seeds: int = 3


def specs_for(cfg: BenchConfig) -> list[GeneratorSpec]:
    out = []
    for n in cfg.sizes:
        out += [GeneratorSpec("random_tree", {"n": n}, s) for s in range(cfg.tree_seeds)]
        out.append(GeneratorSpec("caterpillar", {"spine": max(1, n // 4), "legs_per": 3}))
        out.append(GeneratorSpec("spider", {"legs": (n - 1) // 2, "len": 2}))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default=None, help="comma-separated vertex counts")
    ap.add_argument("--k", default=None, help="comma-separated bag budgets")
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    cfg = BenchConfig()
    if args.sizes:
        cfg.sizes = [int(x) for x in args.sizes.split(",")]
    if args.k:
        cfg.ks = [int(x) for x in args.k.split(",")]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            run_bench(specs_for(cfg), cfg.ks, fh)
    else:
        run_bench(specs_for(cfg), cfg.ks, sys.stdout)


if __name__ == "__main__":
    main()
