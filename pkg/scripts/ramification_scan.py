"""Compare the toric normalization above a node x^a y^b = t^e against closed forms.

For a | e and b | e the normalization has gcd(a, b) points above the node, each an
A_{n-1} point with n = e / lcm(a, b), resolved by a chain of (-2)-curves whose
fiber multiplicities are all 1.

    python3 scripts/ramification_scan.py --max-mult 8 --max-factor 6
"""
import argparse
from math import gcd, lcm

from fiberlab.basechange import local_model


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-mult", type=int, default=6)
    ap.add_argument("--max-factor", type=int, default=4)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()

    checked, bad = 0, []
    for a in range(1, args.max_mult + 1):
        for b in range(a, args.max_mult + 1):
            for t in range(1, args.max_factor + 1):
                e = lcm(a, b) * t
                m = local_model(a, b, e)
                want = (gcd(a, b), e // lcm(a, b) - 1)
                got = (m.points_above, m.chain_length_per_point)
                ok = got == want and all(s == -2 for s in m.toric.self_intersections) \
                    and all(x == 1 for x in m.toric.fiber_mults)
                checked += 1
                if args.verbose or not ok:
                    print(f"a={a} b={b} e={e}: points={got[0]} chain={got[1]} expected={want} {'ok' if ok else 'MISMATCH'}")
                if not ok:
                    bad.append((a, b, e))
    print(f"{checked} local models, {len(bad)} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
