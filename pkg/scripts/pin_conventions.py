"""Pin the sign conventions against the covariance oracles and write the ledger.

    python3 scripts/pin_conventions.py [--trials 50] [--out conventions.json]
"""
import argparse
import sys

from gaugejet.harness import config_from_dict, save_ledger
from gaugejet.harness.runner import pin_conventions


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="conventions.json")
    args = ap.parse_args()
    scenarios = [{"name": f"{g}-n{n}-{f}", "n": n, "group": g, "fiber": f, "trials": args.trials}
                 for g, f in (("U1", "linear"), ("SO3", "adjoint"), ("SU2", "linear"))
                 for n in (2, 3)]
    cfg = config_from_dict({"seed": args.seed, "scenarios": scenarios})
    conv, checks, notes = pin_conventions(cfg)
    for c in checks:
        print(f"{c.check:28s} winner residual {c.max_residual:.2e} over {c.trials} trials")
    for n in notes:
        print("note:", n["message"])
    if conv is None:
        print("no consistent sign assignment; ledger not written", file=sys.stderr)
        return 1
    save_ledger(conv, args.out)
    print(f"wrote {args.out}: {conv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
