"""Acceptance criteria, each run through the command-line tool at its stated tolerance.

Every CLI invocation is made once in a subprocess and its report is kept;
the determinism criterion repeats all of them and compares the reports
with the timing block removed.  Run only this file with ``-m acceptance``;
deselect it with ``-m "not acceptance"``.
"""
import json
import subprocess
import sys

import pytest

from relkit.rootcore import all_systems

pytestmark = pytest.mark.acceptance

RUNS: dict = {}


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


def _invoke(argv, out_path):
    proc = subprocess.run([sys.executable, "-m", "relkit.cli", *argv, "--out", str(out_path)],
                          capture_output=True, text=True)
    assert proc.returncode in (0, 1, 3), proc.stderr
    with open(out_path) as fh:
        return proc.returncode, json.load(fh)


def cli(workdir, name, argv, manifest=None):
    """Run one CLI command once per session and return (exit code, report)."""
    if name not in RUNS:
        if manifest is not None:
            path = workdir / f"{name}-manifest.json"
            path.write_text(json.dumps(manifest))
            argv = [*argv, "--manifest", str(path)]
        code, report = _invoke(argv, workdir / f"{name}.json")
        RUNS[name] = {"argv": argv, "code": code, "report": report}
    run = RUNS[name]
    return run["code"], run["report"]


def records_by_case(report):
    return {r["case"]: r for r in report["records"]}


# 1. root-system lemmas over every system of rank <= 8

@pytest.mark.xfail(strict=True, reason="13 construction-case counterexamples, see the decisions ledger")
def test_criterion_01_relative_root_campaign(workdir, acceptance_log):
    code, report = cli(workdir, "relroots", ["relroots", "verify", "--max-rank", "8"])
    roll = report["rollup"]
    seconds = report["timing"]["seconds"]
    failing = [r["case"] for r in report["records"] if r["status"] == "fail"]
    ok = roll["fail"] == 0 and seconds <= 600
    acceptance_log(1, ok, f"{roll['total']} cases, {roll['fail']} failing in {seconds:.0f}s: {failing}")
    assert ok


# 2. Chevalley commutator constants

def test_criterion_02_chevalley_constants(workdir, acceptance_log):
    systems = [(s, r) for s, r in all_systems(4)] + [("E", 6), ("E", 7), ("E", 8)]
    manifest = {"cases": [{"series": s, "rank": r} for s, r in systems], "seed": 0}
    code, report = cli(workdir, "constants", ["constants", "compute"], manifest)
    recs = report["records"]
    bad = []
    for r in recs:
        numeric = r["case"].startswith("E")
        if numeric and (r["mode"] != "numeric" or r["samples_per_pair"] < 100
                        or sorted(r["primes"]) != [5, 7, 11]):
            bad.append(r["case"])
        if not numeric and r["mode"] != "symbolic":
            bad.append(r["case"])
        if r["failures"] or r["c11_match"] != r["pairs"]:
            bad.append(r["case"])
    pairs = sum(r["pairs"] for r in recs)
    ok = code == 0 and len(recs) == len(systems) and not bad
    acceptance_log(2, ok, f"{len(recs)} systems, {pairs} pairs with C11 = N, problems: {bad}")
    assert ok


# 3 - 5. relative calculus on the roster

def _relcalc(workdir):
    return cli(workdir, "relcalc", ["relcalc", "verify", "--seed", "0", "--random-count", "1000"])


def test_criterion_03_relcalc_identities(workdir, acceptance_log):
    _, report = _relcalc(workdir)
    bad = []
    for r in report["records"]:
        ident = r["identities"]
        if ident["sum"]["failures"] or ident["chev"]["failures"] or ident.get("rep_independence"):
            bad.append((r["case"], "identities"))
        if not all(ident["round_trip"].values()):
            bad.append((r["case"], "round trip"))
        abe = r.get("ABe", [])
        if r["case"].startswith("A") and sorted(a["ring"] for a in abe) != ["F2", "F3", "Z/4"]:
            bad.append((r["case"], "lemma rings"))
        if any(a["failures"] for a in abe) or any(a["pairs"] == 0 for a in abe):
            bad.append((r["case"], "lemma counterexamples"))
    checked = sum(a["checked"] for r in report["records"] for a in r.get("ABe", []))
    ok = len(report["records"]) == 5 and not bad
    acceptance_log(3, ok, f"5 roster cases, {checked} module vectors checked, problems: {bad}")
    assert ok


@pytest.mark.xfail(strict=True, reason="special chains that are not dominance-minimal, see the decisions ledger")
def test_criterion_04_nested_commutator_chains(workdir, acceptance_log):
    _, report = _relcalc(workdir)
    bad, coverage = [], []
    for r in report["records"]:
        if "chain_comm" not in r:
            continue
        cc = r["chain_comm"]
        rank = int(r["case"][1])
        if rank == 2 and cc["mode"] != "exhaustive":
            coverage.append(r["case"])
        if rank == 3 and (cc["mode"] != "random" or cc["min_samples_per_chain"] < 1000):
            coverage.append(r["case"])
        if cc["ring"] != "F3":
            coverage.append(r["case"])
        bad += [(r["case"], f["chain"], f["failures"], f["samples"]) for f in cc["failures"]]
    ok = not bad and not coverage
    acceptance_log(4, ok, f"failing chains: {bad}, coverage problems: {coverage}")
    assert ok


def test_criterion_05_F_map_surjective(workdir, acceptance_log):
    _, report = _relcalc(workdir)
    recs = records_by_case(report)
    wanted = {("A3:J=1,3", "F2"), ("A3:J=1,3", "F3"), ("C3:J=1,2", "F3")}
    found = {}
    for case, r in recs.items():
        for row in r.get("F_surjective", []):
            found[(case, row["field"])] = row["surjective"]
    missing = wanted - set(found)
    ok = not missing and all(found[w] for w in wanted)
    acceptance_log(5, ok, f"spans: {sorted(found.items())}, missing: {sorted(missing)}")
    assert ok


# 6 - 7. Steinberg groups

def _steinberg(workdir):
    return cli(workdir, "steinberg", ["steinberg", "enumerate", "--strict"])


def test_criterion_06_steinberg_centrality(workdir, acceptance_log):
    code, report = _steinberg(workdir)
    recs = records_by_case(report)
    wanted = ["A2/J={1,2}/F2", "A2/J={1,2}/F3", "A2/J={1,2}/Z/4", "C2/J={1,2}/F3"]
    bad, kernels = [], {}
    for case in wanted:
        r = recs.get(case)
        if r is None or r["status"] == "overflow":
            bad.append(case)
            continue
        kernels[case] = r["kernel_order"]
        if (r["relator_failures"] or not r["divides"] or not r["central"]
                or r["St"] > 2_000_000 or r["stats"]["peak"] > 2_000_000):
            bad.append(case)
    ok = code != 3 and not bad
    acceptance_log(6, ok, f"measured kernel orders {kernels}, problems: {bad}")
    assert ok


def test_criterion_07_mono_and_level_kernels(workdir, acceptance_log):
    _, report = _steinberg(workdir)
    bad = []
    for r in report["records"]:
        bad += [(r["case"], m["S"]) for m in r["mono"] if m["status"] != "ok"]
    recs = records_by_case(report)
    kers = {}
    for case, ideal in (("A2/J={1,2}/Z/4", "(2)"), ("A2/J={1,2}/F2[t]/(t^2)", "(t)")):
        row = next((k for k in recs[case]["st_ker"] if k["ideal"] == ideal), None)
        kers[(case, ideal)] = None if row is None else row["status"]
    ok = not bad and all(v == "ok" for v in kers.values())
    monos = sum(len(r["mono"]) for r in report["records"])
    acceptance_log(7, ok, f"{monos} unipotent checks, failing {bad}; level kernels {kers}")
    assert ok


# 8 - 9. matrix groups over finite rings

def test_criterion_08_ideal_extraction(workdir, acceptance_log):
    code, report = cli(workdir, "normality", ["lab", "normality", "--seeds", "25", "--seed", "0"])
    bad, discrepancies = [], []
    for r in report["records"]:
        closures = [row for row in r["rows"] if row["N"].startswith("<<")]
        if len(closures) != 25:
            bad.append((r["case"], "seed count"))
        for row in r["rows"]:
            if row["status"] != "ok":
                bad.append((r["case"], row["N"]))
            if "E_RI_equals_E_star" in row:
                if row["E_RI_equals_E_star"] and not row["ideal_matches"]:
                    bad.append((r["case"], row["N"], row["ideal"]))
                if not row["E_RI_equals_E_star"]:
                    discrepancies.append((r["case"], row["N"]))
        if not r["monotone"]:
            bad.append((r["case"], "monotone"))
    ok = len(report["records"]) == 8 and not bad
    acceptance_log(8, ok, f"{len(report['records'])} cases, problems: {bad}, "
                          f"E(R,I) != E* reported for: {discrepancies}")
    assert ok


def test_criterion_09_gauss_and_diameter(workdir, acceptance_log):
    manifest = {"cases": [{"series": "A", "rank": 2, "ring": "F2"},
                          {"series": "A", "rank": 2, "ring": "F4"},
                          {"series": "C", "rank": 2, "ring": "F3"}]}
    code, report = cli(workdir, "diameter", ["lab", "diameter"], manifest)
    bad, shown = [], {}
    for r in report["records"]:
        g = r["gauss"]
        if g["status"] != "ok" or g["covered"] != r["order"]:
            bad.append((r["case"], "gauss"))
        hist = r["histogram"]
        if r["diameter"] is None or hist is None or sum(hist) != r["order"]:
            bad.append((r["case"], "diameter"))
        shown[r["case"]] = (r["order"], r["diameter"], hist)
    ok = code == 0 and len(report["records"]) == 3 and not bad
    acceptance_log(9, ok, f"order, diameter, histogram: {shown}, problems: {bad}")
    assert ok


# 10. determinism

def test_criterion_10_determinism(workdir, acceptance_log):
    assert RUNS, "run the other criteria first"
    differ = []
    for name, run in sorted(RUNS.items()):
        _, again = _invoke(run["argv"], workdir / f"{name}-again.json")
        first = dict(run["report"])
        first.pop("timing")
        again.pop("timing")
        if json.dumps(first, sort_keys=True) != json.dumps(again, sort_keys=True):
            differ.append(name)
    ok = not differ
    acceptance_log(10, ok, f"reran {sorted(RUNS)}; differing reports: {differ}")
    assert ok
