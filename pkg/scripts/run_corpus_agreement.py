#!/usr/bin/env python3
"""Cross-validate the decision engine against the process-game oracle on a
seeded corpus of random bounded nets.

Example:
    python3 scripts/run_corpus_agreement.py --seed 42 --count 500 --depth 5
"""

import argparse
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from netbisim import decide_oim, decide_oimc, oracle_game
from netbisim.randnets import CorpusConfig, random_instance


def check_instance(args):
    net, m1, m2, depth, bound = args
    rows = []
    for flavor, decide in (("fc", decide_oim), ("cn", decide_oimc)):
        oracle = oracle_game(net, m1, m2, flavor, depth)
        if oracle.outcome == "unknown":
            rows.append((flavor, "unknown", None))
            continue
        verdict = decide(net, m1, m2, bound)
        rows.append((flavor, oracle.outcome, verdict.outcome))
    return rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--depth", type=int, default=5)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    config = CorpusConfig()
    instances = [
        (*random_instance(rng, config), args.depth, config.bound)
        for _ in range(args.count)
    ]

    t0 = time.time()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(check_instance, instances))
    else:
        results = [check_instance(inst) for inst in instances]

    tally: dict[str, int] = {}
    disagreements = 0
    for i, rows in enumerate(results):
        for flavor, oracle_out, engine_out in rows:
            tally[f"{flavor}:{oracle_out}"] = tally.get(f"{flavor}:{oracle_out}", 0) + 1
            if engine_out is not None and engine_out != oracle_out:
                disagreements += 1
                net, m1, m2, _, _ = instances[i]
                print(f"DISAGREEMENT instance {i} flavor {flavor}: "
                      f"engine={engine_out} oracle={oracle_out}")
                print(f"  net: {net}")
                print(f"  m1={m1}  m2={m2}")

    elapsed = time.time() - t0
    for key in sorted(tally):
        print(f"{key:>20}: {tally[key]}")
    print(f"{args.count} instances in {elapsed:.1f}s, "
          f"{disagreements} disagreements")
    return 0 if disagreements == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
