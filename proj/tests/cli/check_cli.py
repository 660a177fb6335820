#!/usr/bin/env python3
"""CLI integration checks: eval values, exit codes, reproducible sampling."""

import math
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = sys.argv[1]
failures = 0


def run(*args, expect=0):
    global failures
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        print(f"FAIL: {' '.join(args)} -> exit {proc.returncode}, expected {expect}")
        print(proc.stdout, proc.stderr)
        failures += 1
    return proc


def check_close(label, got, want, rel=1e-8):
    global failures
    if not math.isclose(got, want, rel_tol=rel, abs_tol=1e-12):
        print(f"FAIL: {label}: got {got}, want {want}")
        failures += 1


# eval spot values
p = run("eval", "lambda", "--n", "2", "--x", "1,2", "--y", "0,1")
check_close("eval lambda", float(p.stdout.split()[0]), math.exp(-3.0))

p = run("eval", "q", "--beta", "1", "--t", "1", "--x", "0", "--y", "2")
check_close("eval q", float(p.stdout.split()[0]), math.exp(-2.0))

p = run("eval", "vandermonde", "--x", "1,2,4")
check_close("eval vandermonde", float(p.stdout.split()[0]), 6.0)

# usage errors exit 2
run("eval", "lambda", "--no-such-flag", expect=2)
run("nonsense-subcommand", expect=2)
run("eval", "lambda", "--n", "3", "--x", "1,2", "--y", "0,1", expect=2)

# fast verify slice exits 0 and writes a report
with tempfile.TemporaryDirectory() as tmp:
    report = Path(tmp) / "report.json"
    run("verify", "--identity", "generator", "--n-max", "1", "--json", str(report))
    if not report.exists() or '"all_pass": true' not in report.read_text():
        print("FAIL: verify report missing or not passing")
        failures += 1

    # seeded sampling is bit-identical; meixner output strictly increasing ints
    s1, s2 = Path(tmp) / "s1.csv", Path(tmp) / "s2.csv"
    run("sample", "laguerre", "--n", "2", "--beta", "2", "--count", "500", "--seed", "7",
        "--out", str(s1))
    run("sample", "laguerre", "--n", "2", "--beta", "2", "--count", "500", "--seed", "7",
        "--out", str(s2))
    if s1.read_bytes() != s2.read_bytes():
        print("FAIL: seeded laguerre samples differ")
        failures += 1
    body = s1.read_text().splitlines()
    if len([ln for ln in body if not ln.startswith("#")]) != 501:  # header + 500 rows
        print("FAIL: laguerre sample row count")
        failures += 1

    mx = Path(tmp) / "mx.csv"
    run("sample", "meixner", "--n", "2", "--beta", "1", "--sigma", "1", "--count", "200",
        "--seed", "1", "--out", str(mx))
    for ln in mx.read_text().splitlines():
        if ln.startswith("#") or ln.startswith("y"):
            continue
        a, b = (int(tok) for tok in ln.split(","))
        if not (0 <= a < b):
            print(f"FAIL: meixner row not strictly increasing: {ln}")
            failures += 1
            break

    # count 0 -> provenance + header only
    empty = Path(tmp) / "empty.csv"
    run("sample", "laguerre", "--n", "2", "--beta", "2", "--count", "0", "--seed", "7",
        "--out", str(empty))
    lines = empty.read_text().splitlines()
    if [ln for ln in lines if not ln.startswith("#")] != ["x1,x2"]:
        print("FAIL: count 0 should leave only the header")
        failures += 1

    # simulate: summary json + reproducibility
    sim1, sim2 = Path(tmp) / "a.csv", Path(tmp) / "b.csv"
    summary = Path(tmp) / "sum.json"
    run("simulate", "sde-free", "--x0", "1,2", "--t-end", "0.1", "--dt", "0.002",
        "--paths", "200", "--seed", "5", "--out", str(sim1), "--summary", str(summary))
    run("simulate", "sde-free", "--x0", "1,2", "--t-end", "0.1", "--dt", "0.002",
        "--paths", "200", "--seed", "5", "--out", str(sim2), "--summary", str(summary))
    if sim1.read_bytes() != sim2.read_bytes():
        print("FAIL: seeded simulate outputs differ")
        failures += 1
    if '"violation_rate"' not in summary.read_text():
        print("FAIL: simulate summary missing diagnostics")
        failures += 1

if failures:
    print(f"{failures} CLI check(s) failed")
    sys.exit(1)
print("all CLI checks passed")
