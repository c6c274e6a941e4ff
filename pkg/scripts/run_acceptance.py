"""Run the acceptance criteria outside pytest and print one line per criterion.

    python scripts/run_acceptance.py            # full run, a few minutes
    python scripts/run_acceptance.py --quick    # n <= 5 sweep, 200 random graphs
"""
import argparse
import dataclasses
import json
import sys

from connpw.workbench import acceptance as acc


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller sweep for a smoke run")
    ap.add_argument("--random-n7", type=int)
    ap.add_argument("--only", help="comma-separated criterion numbers")
    ap.add_argument("--json", help="write results (with metrics) to this file")
    args = ap.parse_args(argv)

    cfg = acc.AcceptanceConfig()
    if args.quick:
        cfg = dataclasses.replace(cfg, exhaustive_max_n=5, random_n7=200, min_triples=200)
    if args.random_n7 is not None:
        cfg = dataclasses.replace(cfg, random_n7=args.random_n7)
    wanted = {int(x) for x in args.only.split(",")} if args.only else set(range(1, 10))

    results = []
    if wanted & {1, 3, 7, 8}:
        sweep = acc.run_sweep(cfg)
        if 1 in wanted:
            results.append(acc.criterion_oracle_equivalence(sweep))
        if 3 in wanted:
            results.append(acc.criterion_witness(sweep))
        if 7 in wanted:
            results.append(acc.criterion_pw(sweep, acc.transform_corpus(cfg) + acc.closure_extra()))
        if 8 in wanted:
            results.append(acc.criterion_state_bound(sweep))
    if 2 in wanted:
        results.append(acc.criterion_known_values())
    if wanted & {4, 5, 6}:
        battery = acc.run_structure_battery(cfg)
        for num, res in ((4, acc.criterion_transform(battery, cfg)),
                         (5, acc.criterion_branch_bound(battery)),
                         (6, acc.criterion_closure(battery))):
            if num in wanted:
                results.append(res)
    if 9 in wanted:
        results.append(acc.criterion_scale(cfg))

    results.sort(key=lambda r: r.number)
    for r in results:
        print(r.line(), flush=True)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"config": dataclasses.asdict(cfg),
                       "results": [dataclasses.asdict(r) for r in results]}, fh, indent=2, default=str)
    return 0 if all(r.ok for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
