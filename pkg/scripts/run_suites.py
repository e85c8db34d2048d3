"""Run a config and print a per-suite table (a human-readable view of the report).

    python3 scripts/run_suites.py configs/smoke.json
"""
import sys

from gaugejet.harness import load_config, run


def main(path):
    cfg = load_config(path)
    rep = run(cfg)
    print(f"seed {rep.seed}  conventions {rep.conventions}")
    print(f"{'scenario/suite':36s} {'check':28s} {'trials':>6s} {'max':>10s} {'tol':>8s}")
    for key, agg in sorted(rep.suites().items()):
        for c in agg["checks"]:
            flag = "" if c["pass"] else "  FAIL"
            print(f"{key:36s} {c['check']:28s} {c['trials']:6d} {c['max_residual']:10.2e} "
                  f"{c['tolerance']:8.0e}{flag}")
    for n in rep.notes:
        print("note:", n["message"])
    print(f"{'PASS' if rep.passed else 'FAIL'} in {rep.wall_time_s:.1f}s")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else "configs/smoke.json"))
