"""Command-line entry point: ``relkit <group> <action> [flags]``.

Every run builds an effective manifest (from --manifest or from the flags),
processes its cases, and emits a JSON report.  Exit codes: 0 all checks
passed, 1 a check failed, 2 invalid input, 3 coset budget exceeded under
--strict.
"""
from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np

from . import __version__
from .config import DEFAULT_COSET_BUDGET, DEFAULT_SEEDS, MAX_RANK, OUT_DIR_ENV
from .rootcore import Permutation, RootSystem, RootSystemError, all_systems, parse_system

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_OVERFLOW = 0, 1, 2, 3

STEINBERG_ROSTER = (("A", 2, "F2"), ("A", 2, "F3"), ("A", 2, "Z/4"), ("A", 2, "F2[t]/(t^2)"),
                    ("C", 2, "F3"))
LAB_ROSTER = (
    ("A", 2, (1, 2), "Z/4"), ("A", 2, (1, 2), "F2[t]/(t^2)"), ("A", 2, (1, 2), "F2"),
    ("A", 2, (1, 2), "F3"), ("A", 2, (1, 2), "F4"), ("A", 3, (1, 2), "F2"),
    ("C", 2, (1, 2), "F3"), ("C", 2, (1, 2), "F5"),
)


class InvalidInput(Exception):
    pass


# schemas and serialization

def load_schema(name: str) -> dict:
    text = resources.files("relkit").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def jsonable(x):
    if isinstance(x, dict):
        return {_key(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    return x


def _key(k) -> str:
    if isinstance(k, tuple):
        return "|".join(",".join(map(str, p)) if isinstance(p, tuple) else str(p) for p in k)
    return str(k)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# cases

@lru_cache(maxsize=None)
def _base(series: str, rank: int) -> RootSystem:
    return RootSystem.build(series, rank)


def _closure(perms: list) -> list:
    group = {p.image: p for p in perms}
    changed = True
    while changed:
        changed = False
        for a, b in itertools.product(list(group.values()), repeat=2):
            c = a.compose(b)
            if c.image not in group:
                group[c.image] = c
                changed = True
    return list(group.values())


def normalize_case(raw: dict, need_ring: bool = False) -> dict:
    """Validate one manifest case and fill defaults; raises InvalidInput."""
    series, rank = raw["series"], raw["rank"]
    try:
        base = _base(series, rank)
    except RootSystemError as exc:
        raise InvalidInput(str(exc)) from None
    if "cartan" in raw and [list(r) for r in raw["cartan"]] != [list(r) for r in base.cartan]:
        raise InvalidInput(f"Cartan matrix given for {base.name} does not match the {base.name} Cartan matrix")
    J = sorted(raw.get("J") or range(1, rank + 1))
    if any(j > rank for j in J):
        raise InvalidInput(f"J={J} has labels outside 1..{rank}")
    gamma = raw.get("Gamma") or []
    for g in gamma:
        if sorted(g) != list(range(1, rank + 1)):
            raise InvalidInput(f"Gamma element {g} is not a permutation of 1..{rank}")
    case = {"series": series, "rank": rank, "J": J,
            "Gamma": sorted(p.image for p in _closure(
                [Permutation(tuple(i - 1 for i in g)) for g in gamma]
                + [Permutation(tuple(range(rank)))]))}
    case["Gamma"] = [[i + 1 for i in g] for g in case["Gamma"]]
    try:
        spec_of(case)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    if need_ring:
        if "ring" not in raw:
            raise InvalidInput(f"case {base.name} needs a ring")
        from .rings import RingError, parse_ring
        try:
            parse_ring(raw["ring"])
        except RingError as exc:
            raise InvalidInput(str(exc)) from None
    if "ring" in raw:
        case["ring"] = raw["ring"]
    case["rep"] = raw.get("rep", "classical" if need_ring else "adjoint")
    case["budgets"] = {"cosets": raw.get("budgets", {}).get("cosets", DEFAULT_COSET_BUDGET)}
    return case


def spec_of(case: dict):
    from .relroots import ProjectionSpec
    base = _base(case["series"], case["rank"])
    gamma = [Permutation(tuple(i - 1 for i in g)) for g in case["Gamma"]] or None
    return ProjectionSpec.make(base, [j - 1 for j in case["J"]], gamma)


def case_label(case: dict) -> str:
    label = spec_of(case).label
    return f"{label}/{case['ring']}" if "ring" in case else label


# workers: each takes (case, options) and returns a record with a status

def work_roots(case, opts) -> dict:
    base = _base(case["series"], case["rank"])
    from .rootcore import reflection_closure
    closure = reflection_closure(base.cartan)
    return {"case": base.name, "rank": base.rank, "roots": len(base.roots),
            "positive": len(base.positive), "highest_root": list(base.highest_root),
            "height": base.height(base.highest_root), "automorphisms": len(base.automorphisms),
            "cartan": base.cartan,
            "status": "pass" if closure == set(base.roots) else "fail"}


def work_relroots(case, opts) -> dict:
    from .relroots import verify_case
    rows = verify_case(spec_of(case))
    failures = [r for r in rows if r["status"] == "fail"]
    return {"case": case_label(case), "J": case["J"], "Gamma": case["Gamma"],
            "lemmas": [[r["lemma"], r["status"]] for r in rows],
            "failures": [{k: v for k, v in r.items() if k != "case"} for r in failures],
            "status": "fail" if failures else "pass"}


def work_constants(case, opts) -> dict:
    from .chevalley import verify_commutator_numeric, verify_commutator_symbolic
    base = _base(case["series"], case["rank"])
    if base.rank <= 4 or base.series in ("F", "G"):
        out = verify_commutator_symbolic(base)
    else:
        out = verify_commutator_numeric(base, seed=opts["seed"])
    rec = {k: v for k, v in out.items() if k != "constants"}
    if opts.get("with_constants") and "constants" in out:
        rec["constants"] = out["constants"]
    rec["case"] = base.name
    rec["status"] = "pass" if not out["failures"] and out["c11_match"] == out["pairs"] else "fail"
    return rec


def work_relcalc(case, opts) -> dict:
    from .relcalc.checks import verify_case
    out = verify_case(spec_of(case), random_count=opts["random_count"], seed=opts["seed"])
    ident = out["identities"]
    bad = bool(ident["sum"]["failures"] or ident["chev"]["failures"] or ident["rep_independence"]
               or not all(ident["round_trip"].values()))
    bad |= any(r["failures"] for r in out.get("ABe", []))
    if "chain_comm" in out:
        bad |= bool(out["chain_comm"]["failures"])
    bad |= not all(r["surjective"] for r in out.get("F_surjective", []))
    out["case"] = case_label(case)
    out["status"] = "fail" if bad else "pass"
    return out


def _group_case(case):
    from .grouplab.cases import make_case
    return make_case(case["series"], case["rank"], case["J"], case["ring"])


def work_steinberg(case, opts) -> dict:
    from .steinberg.cosets import CosetOverflow
    from .steinberg.presentation import presentation
    from .steinberg.verify import (enumerate_steinberg, verify_K2_centrality, verify_mono,
                                   verify_st_ker)
    gc = _group_case(case)
    budget = opts.get("budget") or case["budgets"]["cosets"]
    try:
        rec = verify_K2_centrality(gc, budget)
        pres = presentation(gc)
        T = enumerate_steinberg(pres, budget)
        monos = [verify_mono(gc, gc.rs.positive, T, pres)]
        monos += [verify_mono(gc, [a], T, pres) for a in gc.roots]
        kers = [verify_st_ker(gc, I, budget) for I in gc.ring.ideals]
    except CosetOverflow as exc:
        return {"case": gc.label, "status": "overflow", "budget": budget, "message": str(exc)}
    rec["mono"] = monos
    rec["st_ker"] = kers
    if opts.get("presentation_dir"):
        path = os.path.join(opts["presentation_dir"], gc.label.replace("/", "_") + ".txt")
        with open(path, "w") as fh:
            fh.write(pres.to_text())
    ok = rec["status"] == "ok" and all(m["status"] == "ok" for m in monos + kers)
    rec["case"] = gc.label
    rec["status"] = "pass" if ok else "fail"
    rec["kernel_order_note"] = "measured, not asserted"
    return rec


def work_normality(case, opts) -> dict:
    from .grouplab.lab import build_lab, level_report, normality_case, verify_E_gen
    lab = build_lab(_group_case(case))
    rec = normality_case(lab, seeds=opts["seeds"], seed=opts["seed"])
    rec["levels"] = [level_report(lab, I) for I in lab.ring.ideals]
    rec["E_generation"] = [verify_E_gen(lab, I) for I in lab.ring.ideals]
    ok = rec["status"] == "ok" and all(r["equal"] for r in rec["E_generation"]) \
        and all(r["containments"] for r in rec["levels"])
    rec["status"] = "pass" if ok else "fail"
    return rec


def work_diameter(case, opts) -> dict:
    from .grouplab.lab import build_lab, gauss_and_diameter
    lab = build_lab(_group_case(case))
    rec = gauss_and_diameter(lab)
    rec["case"] = lab.case.label
    gauss = rec["gauss"]["status"]
    if gauss == "fail" or (rec["diameter"] is None and rec["histogram"] is not None):
        rec["status"] = "fail"
    else:
        rec["status"] = "measured"
    return rec


WORKERS = {
    ("roots", "inspect"): work_roots,
    ("relroots", "verify"): work_relroots,
    ("constants", "compute"): work_constants,
    ("relcalc", "verify"): work_relcalc,
    ("steinberg", "enumerate"): work_steinberg,
    ("lab", "normality"): work_normality,
    ("lab", "diameter"): work_diameter,
}
NEEDS_RING = {("steinberg", "enumerate"), ("lab", "normality"), ("lab", "diameter")}


# default case lists

def _split_case(series, rank, J=None, ring=None) -> dict:
    raw = {"series": series, "rank": rank, "J": list(J or range(1, rank + 1))}
    if ring:
        raw["ring"] = ring
    return raw


def default_cases(command, args) -> list:
    max_rank = args.max_rank or MAX_RANK
    if args.case:
        try:
            series, rank = parse_system(args.case)
        except RootSystemError as exc:
            raise InvalidInput(str(exc)) from None
        J = [int(x) for x in args.J.split(",")] if args.J else None
        return [_split_case(series, rank, J, args.ring)]
    if command in (("roots", "inspect"), ("constants", "compute")):
        return [_split_case(s, r) for s, r in all_systems(max_rank)]
    if command == ("relroots", "verify"):
        from .relroots import campaign_specs
        return [{"series": s.base.series, "rank": s.base.rank, **{k: v for k, v in s.describe().items()
                                                                  if k in ("J", "Gamma")}}
                for s in campaign_specs(max_rank)]
    if command == ("relcalc", "verify"):
        from .relcalc.checks import ROSTER
        return [_split_case(s, r, J) for s, r, J in ROSTER if r <= max_rank]
    if command == ("steinberg", "enumerate"):
        return [_split_case(s, r, None, R) for s, r, R in STEINBERG_ROSTER
                if args.ring in (None, R)]
    return [_split_case(s, r, J, R) for s, r, J, R in LAB_ROSTER if args.ring in (None, R)]


def build_manifest(command, args) -> dict:
    if args.manifest:
        try:
            with open(args.manifest) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput(f"cannot read manifest: {exc}") from None
        try:
            jsonschema.validate(raw, load_schema("manifest"))
        except jsonschema.ValidationError as exc:
            raise InvalidInput(f"manifest schema: {exc.message}") from None
        cases = raw.get("cases", [])
        seed = raw.get("seed", args.seed)
        seeds = raw.get("seeds", args.seeds)
    else:
        cases = default_cases(command, args)
        seed, seeds = args.seed, args.seeds
    need_ring = command in NEEDS_RING
    cases = [normalize_case(c, need_ring) for c in cases]
    if need_ring and command == ("steinberg", "enumerate") and args.budget:
        for c in cases:
            c["budgets"]["cosets"] = args.budget
    return {"command": " ".join(command), "cases": cases, "seed": seed, "seeds": seeds,
            "random_count": args.random_count}


# running and reporting

def _run_one(item):
    command, case, opts = item
    t = time.perf_counter()
    rec = WORKERS[command](case, opts)
    return jsonable(rec), time.perf_counter() - t


def run_cases(command, manifest, args) -> tuple:
    opts = {"seed": manifest["seed"], "seeds": manifest["seeds"],
            "random_count": manifest["random_count"], "budget": None,
            "with_constants": bool(args.case), "presentation_dir": args.presentation_dir}
    items = [(command, c, opts) for c in manifest["cases"]]
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, items))
    else:
        results = [_run_one(it) for it in items]
    return [r for r, _ in results], [t for _, t in results]


def rollup(records) -> dict:
    counts = {k: 0 for k in ("pass", "fail", "overflow", "skipped", "measured")}
    for r in records:
        counts[r["status"]] += 1
    status = "fail" if counts["fail"] else "overflow" if counts["overflow"] else "pass"
    return {"total": len(records), **counts, "status": status}


def make_report(manifest, records, timings, seconds) -> dict:
    report = {
        "tool": "relkit", "version": __version__, "command": manifest["command"],
        "manifest_hash": hashlib.sha256(canonical_json(manifest).encode()).hexdigest(),
        "manifest": manifest, "records": records, "rollup": rollup(records),
        "timing": {"seconds": seconds, "cases": timings},
    }
    jsonschema.validate(report, load_schema("report"))
    return report


def report_path(report, args) -> str | None:
    if args.out:
        return args.out
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir:
        name = report["command"].replace(" ", "-") + "-" + report["manifest_hash"][:12] + ".json"
        return os.path.join(out_dir, name)
    return None


def write_report(report, path: str):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=1)
        fh.write("\n")


TABLE_FIELDS = {
    "roots inspect": ("case", "status", "roots", "positive", "height", "automorphisms"),
    "relroots verify": ("case", "status", "failures"),
    "constants compute": ("case", "status", "mode", "pairs", "c11_match"),
    "relcalc verify": ("case", "status"),
    "steinberg enumerate": ("case", "status", "St", "E", "kernel_order", "relators", "central"),
    "lab normality": ("case", "status", "order", "distinct_subgroups", "monotone", "failures"),
    "lab diameter": ("case", "status", "order", "U", "diameter", "histogram"),
}


def format_table(report) -> str:
    fields = TABLE_FIELDS.get(report["command"], ("case", "status"))
    rows = []
    for r in report["records"]:
        row = {}
        for f in fields:
            if f in r:
                v = r[f]
                if isinstance(v, list) and f != "histogram":
                    v = len(v)
                row[f] = str(v)
        rows.append(row)
    cols = [f for f in fields if any(f in row for row in rows)] or ["case", "status"]
    widths = {c: max([len(c)] + [len(row.get(c, "")) for row in rows]) for c in cols}
    lines = ["  ".join(c.ljust(widths[c]) for c in cols)]
    lines.append("  ".join("-" * widths[c] for c in cols))
    for row in rows:
        lines.append("  ".join(row.get(c, "").ljust(widths[c]) for c in cols))
    roll = report["rollup"]
    lines.append(f"{report['command']}: {roll['total']} cases, {roll['pass']} pass, {roll['fail']} fail, "
                 f"{roll['overflow']} overflow, {roll['measured']} measured, {roll['skipped']} skipped")
    return "\n".join(lines)


def exit_code(report, strict: bool) -> int:
    roll = report["rollup"]
    if roll["fail"]:
        return EXIT_FAIL
    if roll["overflow"] and strict:
        return EXIT_OVERFLOW
    return EXIT_OK


def cmd_run(command, args) -> int:
    manifest = build_manifest(command, args)
    t = time.perf_counter()
    records, timings = run_cases(command, manifest, args)
    report = make_report(manifest, records, timings, time.perf_counter() - t)
    path = report_path(report, args)
    if path:
        write_report(report, path)
    if args.pretty:
        print(format_table(report))
    elif not path:
        print(json.dumps(report, sort_keys=True, indent=1))
    else:
        print(f"{path}: {report['rollup']['status']}")
    return exit_code(report, args.strict)


def cmd_summarize(args) -> int:
    code = EXIT_OK
    schema = load_schema("report")
    for path in args.reports:
        try:
            with open(path) as fh:
                report = json.load(fh)
            jsonschema.validate(report, schema)
        except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as exc:
            raise InvalidInput(f"{path}: {getattr(exc, 'message', exc)}") from None
        print(format_table(report) if args.pretty else canonical_json(
            {"report": path, "command": report["command"], "rollup": report["rollup"]}))
        code = max(code, exit_code(report, args.strict))
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", help="JSON case manifest")
    common.add_argument("--case", help="root system such as A2 or E8")
    common.add_argument("--J", help="kept simple roots, 1-based and comma separated")
    common.add_argument("--ring", help="ring descriptor: F3, F4, Z/4, F2[t]/(t^2)")
    common.add_argument("--max-rank", type=int, default=None)
    common.add_argument("--budget", type=int, default=None, help="coset budget")
    common.add_argument("--seeds", type=int, default=DEFAULT_SEEDS, help="random normal closures per case")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed")
    common.add_argument("--random-count", type=int, default=1000, help="random tuples per chain")
    common.add_argument("--strict", action="store_true", help="budget overflow exits with code 3")
    common.add_argument("--out", help=f"report path (default: ${OUT_DIR_ENV}/<command>-<hash>.json)")
    common.add_argument("--pretty", action="store_true", help="aligned text table on stdout")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--presentation-dir", help="write Steinberg presentations here")

    parser = argparse.ArgumentParser(prog="relkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True)
    actions = {}
    for group, action in WORKERS:
        actions.setdefault(group, []).append(action)
    actions.setdefault("report", []).append("summarize")
    for group, names in actions.items():
        gp = groups.add_parser(group).add_subparsers(dest="action", required=True)
        for name in names:
            if (group, name) == ("report", "summarize"):
                sp = gp.add_parser(name)
                sp.add_argument("reports", nargs="+")
                sp.add_argument("--pretty", action="store_true")
                sp.add_argument("--strict", action="store_true")
            else:
                gp.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if (args.group, args.action) == ("report", "summarize"):
            return cmd_summarize(args)
        return cmd_run((args.group, args.action), args)
    except InvalidInput as exc:
        print(f"relkit: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:          # hypothesis gates of the target module
        print(f"relkit: precondition failed: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
