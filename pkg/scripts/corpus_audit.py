"""Print a table of per-fiber invariants and check outcomes for the built-in corpus.

    python3 scripts/corpus_audit.py [--failures-only]
"""
import argparse
import time
import warnings

from fiberlab.basechange import FractionalContractionWarning
from fiberlab.corpus import run_corpus


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--failures-only", action="store_true")
    args = ap.parse_args()
    warnings.simplefilter("ignore", FractionalContractionWarning)

    t0 = time.perf_counter()
    results = run_corpus()
    dt = time.perf_counter() - t0

    cols = ("name", "kind", "g", "e", "c1_sq", "c2", "chi", "c_minus_1", "checks")
    rows = []
    for r in results:
        failed = [c.name for c in r.checks if not c.ok]
        if args.failures_only and not failed:
            continue
        v = r.values
        status = f"{len(r.checks) - len(failed)}/{len(r.checks)}" + (f" FAILED: {failed}" if failed else "")
        rows.append([r.name, r.kind] + [str(v.get(k, "")) for k in cols[2:-1]] + [status])
    widths = [max(len(c), *(len(row[i]) for row in rows)) if rows else len(c) for i, c in enumerate(cols)]
    print("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
    for row in rows:
        print("  ".join(x.ljust(w) for x, w in zip(row, widths)))
    bad = sum(not r.ok for r in results)
    print(f"\n{len(results)} entries, {bad} failing, {dt:.2f} s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
