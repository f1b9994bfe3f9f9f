"""CLI checks: exit codes, output formats, and schema conformance of every JSON document."""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

CLI, SCHEMA = sys.argv[1], sys.argv[2]
with open(SCHEMA) as f:
    validator = jsonschema.Draft202012Validator(json.load(f))

failures = []


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + (f": {detail}" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def valid_json(name, *args):
    p = run(*args)
    if p.returncode != 0:
        check(name, False, f"exit {p.returncode}: {p.stderr.strip()}")
        return None
    doc = json.loads(p.stdout)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
    check(name, not errors, "; ".join(f"{list(e.path)}: {e.message}" for e in errors[:3]))
    return doc


def csv_rows(name, header, *args):
    p = run(*args, "--format", "csv")
    if p.returncode != 0:
        check(name, False, f"exit {p.returncode}: {p.stderr.strip()}")
        return []
    rows = list(csv.reader(io.StringIO(p.stdout)))
    check(name, rows and rows[0] == header, f"header {rows[0] if rows else None}")
    return rows[1:]


M4 = ["--model", "4", "--r", "2.5", "--b", "0.97"]
M3 = ["--model", "3", "--R0", "2", "--b", "3.5"]
M2 = ["--model", "2", "--r", "2.92", "--b", "1.9"]

doc = valid_json("analyze json", "analyze", *M4)
if doc:
    check("analyze finds two coexistence equilibria", doc["region"]["n_coexistence"] == 2)
valid_json("analyze degenerate", "analyze", "--model", "1", "--r", "0", "--b", "2")
valid_json("equilibria json", "equilibria", *M4)
valid_json("jury json", "jury", *M4)
valid_json("boundary json", "boundary", "--model", "4", "--points", "16", "--lines")
valid_json("simulate json", "simulate", *M3, "--transient", "10", "--n", "5")
doc = valid_json("classify json", "classify", *M3, "--tail")
if doc:
    check("classify sees the invariant circle", doc["class"] == "invariant_circle")
valid_json("cycle json", "cycle", "--model", "4", "--r", "2.5", "--b", "0.98", "--from-equilibrium")
valid_json("cycle from guess", "cycle", "--model", "2", "--r", "2.11", "--b", "1.1", "--guess", "0.71,0.13;1.16,0.16")
valid_json("lyapunov json", "lyapunov", "--model", "4", "--r", "2.3", "--b", "2.2", "--n", "20000")
valid_json("basin json", "basin", *M2, "--nx", "4", "--ny", "4", "--transient", "2000")
valid_json("scan json", "scan", *M3, "--param", "b", "--start", "3", "--stop", "3.5", "--count", "3", "--tail-points", "5")
valid_json("scan reset json", "scan", *M2, "--param", "r", "--start", "2.91", "--stop", "2.93", "--count", "3",
           "--policy", "reset", "--tail-points", "5", "--threads", "2", "--seed", "3", "--random-starts", "2")
valid_json("region json", "region", "--model", "3", "--growth-lo", "1", "--growth-hi", "10", "--b-hi", "10",
           "--n-growth", "8", "--n-b", "8")

csv_rows("analyze csv", ["x", "y", "kind", "verdict"], "analyze", *M4)
csv_rows("equilibria csv", ["x", "y", "kind", "provenance", "residual"], "equilibria", *M4)
csv_rows("jury csv", ["x", "y", "tau", "delta", "j1", "j2", "j3", "verdict"], "jury", *M4)
csv_rows("boundary csv", ["internal_param", "growth_param", "b", "model", "jury"], "boundary", "--model", "2")
rows = csv_rows("simulate csv", ["t", "x", "y"], "simulate", *M3, "--n", "4")
check("simulate csv row count", len(rows) == 4)
csv_rows("scan csv", ["param", "x_or_y", "class"], "scan", *M3, "--param", "b", "--start", "3", "--stop", "3.5",
         "--count", "2", "--tail-points", "3")
rows = csv_rows("region csv", ["growth_param", "b", "n_equilibria", "stable", "failing_conditions"], "region",
                "--model", "4", "--growth-lo", "0", "--growth-hi", "5", "--b-hi", "3", "--n-growth", "6", "--n-b", "6",
                "--refine", "false")
check("region csv row count", len(rows) == 36)
csv_rows("basin csv", ["x", "y", "label"], "basin", *M2, "--nx", "3", "--ny", "3", "--transient", "2000")
csv_rows("lyapunov csv", ["lyapunov_max", "iterations"], "lyapunov", "--model", "4", "--r", "2.3", "--b", "2.2")

# Thread count does not change results.
a = run("region", "--model", "4", "--growth-lo", "0", "--growth-hi", "5", "--b-hi", "3", "--n-growth", "32", "--n-b", "32",
        "--format", "csv", "--threads", "1").stdout
b = run("region", "--model", "4", "--growth-lo", "0", "--growth-hi", "5", "--b-hi", "3", "--n-growth", "32", "--n-b", "32",
        "--format", "csv", "--threads", "4").stdout
check("region identical for 1 and 4 threads", a == b and len(a) > 0)

# Exit codes.
check("bad R0 exits 2", run("analyze", "--model", "3", "--R0", "0.5", "--b", "2").returncode == 2)
check("negative b exits 2", run("analyze", "--model", "1", "--r", "1", "--b", "-1").returncode == 2)
check("missing growth exits 2", run("analyze", "--model", "1", "--b", "2").returncode == 2)
check("both r and R0 exits 2", run("analyze", "--model", "1", "--r", "1", "--R0", "2", "--b", "2").returncode == 2)
check("unknown model exits 2", run("analyze", "--model", "7", "--r", "1", "--b", "2").returncode == 2)
check("unknown subcommand exits 2", run("frobnicate").returncode == 2)
check("negative start state exits 2", run("simulate", *M3, "--x0", "-1").returncode == 2)
check("scan count 1 exits 2", run("scan", *M3, "--param", "b", "--start", "3", "--stop", "4", "--count", "1").returncode == 2)
check("unwritable output exits 2", run("analyze", *M4, "--out", "/nonexistent-dir/x.json").returncode == 2)
check("unknown figure exits 2", run("reproduce-figure", "99", "--out", tempfile.mkdtemp()).returncode == 2)
p = run("cycle", "--model", "4", "--r", "2.3", "--b", "2.2", "--guess", "0.5,0.5", "--period", "7")
check("failed Newton exits 3", p.returncode == 3, f"exit {p.returncode}: {p.stderr.strip()}")
p = run("--help")
check("help mentions validity domains", p.returncode == 0 and "analyze" in p.stdout)
p = run("analyze", "--help")
check("subcommand help states domains", "R0 >= 1" in p.stdout and "b > 0" in p.stdout)

# Output file is written only on success.
with tempfile.TemporaryDirectory() as d:
    out = os.path.join(d, "a.json")
    check("--out writes the file", run("analyze", *M4, "--out", out).returncode == 0 and os.path.getsize(out) > 0)
    bad = os.path.join(d, "bad.json")
    run("analyze", "--model", "3", "--R0", "0.5", "--b", "2", "--out", bad)
    check("failed run leaves no file", not os.path.exists(bad))

    fig = os.path.join(d, "fig8")
    p = run("reproduce-figure", "8", "--out", fig)
    check("reproduce-figure 8", p.returncode == 0, p.stderr)
    with open(os.path.join(fig, "manifest.json")) as f:
        manifest = json.load(f)
    errors = list(validator.iter_errors(manifest))
    check("figure manifest conforms", not errors, str(errors[:1]))
    check("manifest lists existing files", all(os.path.exists(os.path.join(fig, n)) for n in manifest["files"]))

    for fid in ["3a", "3b", "3c", "3d", "4", "5", "6", "7", "9", "10", "11"]:
        out = os.path.join(d, "fig" + fid)
        p = run("reproduce-figure", fid, "--out", out, "--budget-scale", "0.05", "--threads", "2")
        ok = p.returncode == 0
        if ok:
            with open(os.path.join(out, "manifest.json")) as f:
                manifest = json.load(f)
            ok = not list(validator.iter_errors(manifest)) and all(
                os.path.getsize(os.path.join(out, n)) > 0 for n in manifest["files"])
        check(f"reproduce-figure {fid} (reduced budget)", ok, p.stderr.strip())

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
