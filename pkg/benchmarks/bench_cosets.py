"""Compare the compiled and pure-Python coset enumeration kernels.

Each workload is a Steinberg group presentation enumerated over the trivial
subgroup.  Both kernels must return identical tables; the script reports the
best wall time of --repeat runs per kernel.

    python benchmarks/bench_cosets.py --repeat 3
    python benchmarks/bench_cosets.py --cases A2:F2 A2:F3 --json bench.json
"""
from __future__ import annotations

import argparse
import json
import time

import numpy as np

from relkit.grouplab.cases import make_case
from relkit.steinberg.cosets import BACKENDS, todd_coxeter
from relkit.steinberg.presentation import presentation

DEFAULT_CASES = ("A2:F2", "A2:F3", "A2:F2[t]/(t^2)")


def run_case(name: str, repeat: int) -> dict:
    system, ring = name.split(":", 1)
    series, rank = system[0], int(system[1:])
    pres = presentation(make_case(series, rank, range(1, rank + 1), ring))
    row = {"case": name, "generators": pres.ngens, "relators": len(pres.relators)}
    tables = {}
    for backend in sorted(BACKENDS):
        best = float("inf")
        for _ in range(repeat):
            t = time.perf_counter()
            T = todd_coxeter(pres.ngens, pres.relators, backend=backend)
            best = min(best, time.perf_counter() - t)
        tables[backend] = T.table
        row[backend] = round(best, 4)
        row["cosets"] = T.size
        row["defined"] = T.stats["defined"]
    row["identical"] = all(np.array_equal(t, tables["python"]) for t in tables.values())
    if "cython" in row:
        row["speedup"] = round(row["python"] / row["cython"], 1)
    return row


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", nargs="+", default=list(DEFAULT_CASES))
    ap.add_argument("--repeat", type=int, default=1)
    ap.add_argument("--json", help="also write the rows here")
    args = ap.parse_args()
    if "cython" not in BACKENDS:
        print("compiled kernel not built; timing the Python kernel only")
    rows = [run_case(c, args.repeat) for c in args.cases]
    cols = ["case", "generators", "relators", "cosets", "defined", "cython", "python", "speedup",
            "identical"]
    cols = [c for c in cols if any(c in r for r in rows)]
    width = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) for c in cols}
    print("  ".join(c.ljust(width[c]) for c in cols))
    for r in rows:
        print("  ".join(str(r.get(c, "")).ljust(width[c]) for c in cols))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
