#!/usr/bin/env python3
"""Exact schedule on Z (every generator is 1), recomputed with Python integers
and compared with `forge schedule --mode exact`. Usage: schedule_oracle.py FORGE"""
import json
import os
import subprocess
import sys
import tempfile


def ball(t):  # |B_t| on Z
    return 2 * t + 1


def least_t(target):  # least t with |B_t| >= target
    return max(0, -(-(target - 1) // 2))


def expected(stages):
    rows, s, total, r_prev = [], 10, 0, 0
    for m in range(1, stages + 1):
        if m > 1:
            s = 1000 * r_prev * kappa
        f = m  # Z at every level: the level just has to grow
        total += 5 * r_prev + s
        r = 10 * least_t(10 ** m * ball(5 * s))
        if m > 1:
            r = max(r, 1000 * total)
        card = ball(r) + 1
        row = {"m": m, "s": s, "f": f, "r": r, "cardF": card}
        if m == 1:
            kappa = card ** ball(s)
            row["kappa"] = kappa
        else:
            row["kappa_expr"] = f"{card}^{ball(s)}"
        rows.append(row)
        r_prev = r
    return rows


def main():
    forge = sys.argv[1]
    with tempfile.TemporaryDirectory() as d:
        rc = subprocess.run([forge, "--out", d, "schedule", "--mode", "exact", "--stages", "2"],
                            stdout=subprocess.DEVNULL).returncode
        if rc != 0:
            print(f"forge schedule exited {rc}")
            return 1
        got = json.load(open(os.path.join(d, "schedule.json")))
    bad = 0
    for want, st in zip(expected(2), got["schedule"]["stages"]):
        for k, v in want.items():
            if k == "m":
                continue
            have = st.get(k)
            if isinstance(v, int) and k != "f":
                have = int(have) if have is not None else None
            if have != v:
                bad += 1
                print(f"stage {want['m']} {k}: forge {str(have)[:60]} oracle {str(v)[:60]}")
    first = expected(1)[0]
    if (first["s"], first["r"], first["cardF"]) != (10, 5050, 10102) or first["kappa"] != 10102 ** 21:
        bad += 1
        print("oracle disagrees with the hand values 10, 5050, 10102, 10102^21")
    if not got["check"]["pass"]:
        bad += 1
        print("schedule check failed:", got["check"]["witnesses"])
    print("exact schedule matches the oracle" if bad == 0 else f"{bad} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
