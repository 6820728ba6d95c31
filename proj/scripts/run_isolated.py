#!/usr/bin/env python3
"""Run a campaign with one `faultloc localize` process per (instance, engine).

A hard wall-clock limit is enforced by killing the child process. The
output CSV has the same columns as `faultloc run-campaign`.
"""
import argparse
import csv
import json
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

HEADER = ["instance", "engine", "status", "time_s", "cost", "num_diagnoses", "iterations"]
ENGINES = ["cfaults", "hsd", "hsd-cm", "bugassist", "sniper"]


def run_one(faultloc, inst, engine, timeout, enum_budget):
    row = {"instance": inst.name, "engine": engine, "cost": "", "num_diagnoses": 0, "iterations": 0}
    obs = inst / "obs.json"
    if not obs.exists():
        row.update(status="no-observations", time_s=0.0)
        return row
    cmd = [faultloc, "localize", str(inst / "circuit.bench"), str(obs), "--engine", engine,
           "--enum-budget", str(enum_budget)]
    start = time.monotonic()
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        row.update(status="timeout", time_s=timeout)
        return row
    row["time_s"] = time.monotonic() - start
    if proc.returncode == 0:
        report = json.loads(proc.stdout)
        row.update(status="valid-diagnosis", cost=report["selected"]["cost"],
                   num_diagnoses=report["stats"]["num_diagnoses"],
                   iterations=report["stats"]["iterations"])
    elif proc.returncode == 2:
        row["status"] = "no-diagnosis"
    elif proc.returncode == 3:
        budget = proc.stdout.strip().startswith("{")
        row["status"] = "memout" if budget else "timeout"
    else:
        sys.exit(f"{inst.name}/{engine}: faultloc failed: {proc.stderr.strip()}")
    return row


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("campaign", type=Path, help="directory holding instances/")
    ap.add_argument("--faultloc", default="faultloc", help="path to the faultloc binary")
    ap.add_argument("--engines", default=",".join(ENGINES))
    ap.add_argument("--timeout", type=float, default=60.0, help="seconds per run")
    ap.add_argument("--enum-budget", type=int, default=1_000_000)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("-o", "--output", type=Path, help="default: <campaign>/results_isolated.csv")
    args = ap.parse_args()

    root = args.campaign / "instances"
    instances = sorted(p for p in root.iterdir() if p.is_dir()) if root.is_dir() else []
    jobs = [(i, e) for i in instances for e in args.engines.split(",")]
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        rows = list(pool.map(
            lambda j: run_one(args.faultloc, j[0], j[1], args.timeout, args.enum_budget), jobs))

    out = args.output or args.campaign / "results_isolated.csv"
    with open(out, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=HEADER, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    print(f"{len(rows)} rows written to {out}")


if __name__ == "__main__":
    main()
