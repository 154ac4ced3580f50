"""Seeded property sweep; prints a table of worst violations per property."""

import argparse
import json

from wvuncertainty.verify import RandomVerifyConfig, run_random_verify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", default="2,3,4,8,16")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", metavar="PATH", help="also write the full summary")
    args = ap.parse_args()

    config = RandomVerifyConfig(dims=tuple(int(d) for d in args.dims.split(",")),
                                trials_per_dim=args.trials, seed=args.seed)
    summary = run_random_verify(config)
    width = max(map(len, summary["properties"]))
    for name, entry in summary["properties"].items():
        flag = "ok  " if entry["pass"] else "FAIL"
        print(f"{flag} {name:<{width}}  {entry['max_violation']:.2e} / {entry['tolerance']:.0e}  ({entry['worst_instance']})")
    print("d=2 saturation:", summary.get("d2_saturation_rate"))
    print("overall:", "pass" if summary["pass"] else "FAIL")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(summary, fh, indent=2)


if __name__ == "__main__":
    main()
