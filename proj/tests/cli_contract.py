#!/usr/bin/env python3
"""Black-box checks of the kinkspec command line: exit codes, schemas,
deterministic output and the documented examples of each subcommand."""
import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile

import jsonschema

CLI = sys.argv[1]
ROOT = sys.argv[2]
failures = []


def run(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    p = subprocess.run([CLI, *args], capture_output=True, text=True, env=full_env, timeout=600)
    return p.returncode, p.stdout, p.stderr


def check(name, cond, detail=""):
    print(("PASS " if cond else "FAIL ") + name + (f"  ({detail})" if detail else ""))
    if not cond:
        failures.append(name)


def schema(name):
    with open(os.path.join(ROOT, "schemas", name)) as f:
        return json.load(f)


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# kinkspec "), lines[0]
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


# params
rc, out, _ = run("params", "--gamma", "0.75")
doc = json.loads(out)
jsonschema.validate(doc, schema("params.schema.json"))
check("params 0.75 gives d=4", rc == 0 and abs(doc["d"] - 4) < 1e-14)
rc, _, err = run("params", "--gamma", "1.5")
check("params 1.5 exits 2", rc == 2 and "gamma must lie in (0,1)" in err, err.strip())
rc, out, _ = run("params", "--gamma", "0.5")
doc = json.loads(out)
check("params 0.5 gives b=d=2", rc == 0 and doc["b"] == 2 and doc["d"] == 2)
rc, _, _ = run("params")
check("missing --gamma exits 2", rc == 2)
rc, _, _ = run("no-such-command")
check("unknown subcommand exits 2", rc == 2)

# gamma-table
rc, out, _ = run("gamma-table", "--kmax", "5")
rows = read_csv(out)
reference = [0.64643, 0.8579, 0.92472, 0.95359, 0.96856]
check("gamma-table k=1..5 match to 1e-4",
      rc == 0 and len(rows) == 5 and all(abs(float(r["gamma_k"]) - g) <= 1e-4 for r, g in zip(rows, reference)))
rc, out, _ = run("gamma-table", "--kmax", "10")
rows = read_csv(out)
g10 = float(rows[-1]["gamma_k"])
approx10 = 1 - 4 / (10 * math.pi) ** 2
check("gamma-table row count = kmax", len(rows) == 10)
check("gamma_10 within 2% of the asymptotic form", abs(g10 - approx10) <= 0.02 * approx10, f"{g10} vs {approx10}")
rc, _, _ = run("gamma-table", "--kmax", "21")
check("gamma-table kmax 21 exits 2", rc == 2)

# certify
report_schema = schema("spectral_report.schema.json")
rc, out, _ = run("certify", "--gamma", "0.75", "--oracle")
doc = json.loads(out)
jsonschema.validate(doc, report_schema)
lam1 = doc["modes"][1]["lambda"]
check("certify 0.75 --oracle all hold", rc == 0 and doc["all_hold"] and doc["oracle"]["agrees"])
check("certify 0.75 oracle within 5e-3", abs(doc["oracle"]["eigenvalues"][1] - lam1) <= 5e-3)
rc, out, _ = run("certify", "--gamma", "0.64643")
doc = json.loads(out)
jsonschema.validate(doc, report_schema)
check("certify 0.64643 fails U2", rc == 1 and not doc["u2"]["holds"])
rc, out, _ = run("certify", "--gamma", "0.705503354705557")
doc = json.loads(out)
check("certify at the computed FGR zero fails U4", rc == 1 and not doc["u4"]["holds"])
rc, out, _ = run("certify", "--gamma", "0.7925")
doc = json.loads(out)
print(f"NOTE certify --gamma 0.7925: u4.holds={doc['u4']['holds']}, "
      f"distance_to_gamma_star={doc['u4']['distance_to_gamma_star']:.6f} (the FGR zero is not at 0.7925)")
rc, out, _ = run("certify", "--gamma", "0.75", "--epsilon", "0.04")
doc = json.loads(out)
jsonschema.validate(doc, report_schema)
check("certify 0.75 --epsilon 0.04 holds", rc == 0 and doc["mollified"]["u4"] and doc["provenance"] == "mollified(0.04)")
rc, _, _ = run("certify", "--gamma", "0.75", "--epsilon", "0.3")
check("certify with oversized epsilon exits 2", rc == 2)
rc, out, _ = run("certify", "--gamma", "0.6")
doc = json.loads(out)
jsonschema.validate(doc, report_schema)
check("certify 0.6 has one eigenvalue", rc == 1 and len(doc["modes"]) == 1)
a = run("certify", "--gamma", "0.8", "--oracle")[1]
b = run("certify", "--gamma", "0.8", "--oracle")[1]
check("certify output is byte-identical across runs", a == b)

# fgr-scan
rc, out1, _ = run("fgr-scan", "--range", "0.65", "0.85", "200")
_, out2, _ = run("fgr-scan", "--range", "0.65", "0.85", "200", env={"KINKSPEC_THREADS": "1"})
_, out3, _ = run("fgr-scan", "--range", "0.65", "0.85", "200", env={"KINKSPEC_THREADS": "3"})
check("fgr-scan deterministic across thread counts", rc == 0 and out1 == out2 == out3)
rows = read_csv(out1)
vals = [float(r["fgr_value"]) for r in rows]
gam = [float(r["gamma"]) for r in rows]
crossings = [i for i in range(1, len(vals)) if (vals[i] > 0) != (vals[i - 1] > 0)]
check("fgr-scan has exactly one sign change", len(crossings) == 1)
check("fgr-scan endpoints have opposite signs", vals[0] * vals[-1] < 0)
lam_ok = all(0 < float(r["lambda1"]) < 1 / (1 - float(r["gamma"])) for r in rows)
check("fgr-scan lambda1 inside (0, d)", lam_ok)
if crossings:
    i = crossings[0]
    step = gam[1] - gam[0]
    check("fgr-scan crossing brackets the computed zero 0.7055",
          gam[i - 1] - step <= 0.705503354705557 <= gam[i] + step, f"[{gam[i - 1]}, {gam[i]}]")
    print(f"NOTE fgr-scan crossing in [{gam[i - 1]:.6f}, {gam[i]:.6f}]; 0.7925 is "
          f"{'inside' if gam[i - 1] - step <= 0.7925 <= gam[i] + step else 'outside'} this bracket")
rc, _, _ = run("fgr-scan", "--range", "0.5", "0.85", "20")
check("fgr-scan outside (gamma_1, gamma_2) exits 2", rc == 2)
rc, _, _ = run("fgr-scan", "--range", "0.65", "0.85", "2.5")
check("fgr-scan with fractional n exits 2", rc == 2)

# converge
rc, out, _ = run("converge", "--gamma", "0.75", "--epsilon", "0.08", "0.04", "0.02")
rows = read_csv(out)
lam_exact = lam1
errs = [abs(float(r["lambda1_eps"]) - lam_exact) for r in rows]
norms = [float(r["w_norm"]) for r in rows]
check("converge exit 0 with three rows", rc == 0 and len(rows) == 3)
check("converge lambda1 error decreases", errs[0] > errs[1] > errs[2])
check("converge w_norm decreases", norms[0] > norms[1] > norms[2])
check("converge 4 lambda1(eps) > d", all(4 * float(r["lambda1_eps"]) > 4 for r in rows))
rc, _, _ = run("converge", "--gamma", "0.75", "--epsilon", "0.02", "0.04")
check("converge with increasing epsilons exits 2", rc == 2)

# simulate
with tempfile.TemporaryDirectory() as tmp:
    rc, out, _ = run("simulate", "--config", os.path.join(ROOT, "configs", "static.json"))
    rows = read_csv(out)
    last = rows[-1]
    check("static preset window_sup <= 5e-3 at t=50",
          rc == 0 and abs(float(last["t"]) - 50) < 1e-9 and float(last["window_sup"]) <= 5e-3, last["window_sup"])
    rc2, out2, _ = run("simulate", "--config", os.path.join(ROOT, "configs", "static.json"))
    check("simulate output is byte-identical across runs", out == out2)

    rc, _, _ = run("simulate", "--config", os.path.join(ROOT, "configs", "boosted.json"), "--out", tmp)
    with open(os.path.join(tmp, "diagnostics.csv")) as f:
        rows = read_csv(f.read())
    pts = [(float(r["t"]), float(r["center"])) for r in rows if 5 <= float(r["t"]) <= 45]
    n = len(pts)
    st = sum(t for t, _ in pts)
    sc = sum(c for _, c in pts)
    stt = sum(t * t for t, _ in pts)
    stc = sum(t * c for t, c in pts)
    slope = (n * stc - st * sc) / (n * stt - st * st)
    check("boosted preset center slope 0.2 +- 0.002", rc == 0 and abs(slope - 0.2) <= 0.002, f"{slope:.6f}")

    rc, _, _ = run("simulate", "--config", os.path.join(ROOT, "configs", "perturbed.json"), "--out", tmp)
    with open(os.path.join(tmp, "diagnostics.csv")) as f:
        rows = read_csv(f.read())
    sups = [float(r["window_sup"]) for r in rows]
    check("perturbed preset stays within 1.1x its initial window deviation",
          rc == 0 and max(sups) <= 1.1 * sups[0], f"{max(sups):.4g} vs {sups[0]:.4g}")

    sim_schema = schema("simulate.schema.json")
    for name in ("static.json", "boosted.json", "perturbed.json"):
        with open(os.path.join(ROOT, "configs", name)) as f:
            jsonschema.validate(json.load(f), sim_schema)

    bad = os.path.join(tmp, "bad.json")
    with open(bad, "w") as f:
        json.dump({"schema": "kinkspec.simulate/1", "profile": {"type": "boosted", "v": 1.5}}, f)
    rc, _, err = run("simulate", "--config", bad)
    check("malformed config exits 2 naming the field", rc == 2 and "profile.v" in err, err.strip())
    with open(bad, "w") as f:
        f.write("{not json")
    rc, _, _ = run("simulate", "--config", bad)
    check("unparsable config exits 2", rc == 2)
    with open(bad, "w") as f:
        json.dump({"schema": "kinkspec.simulate/1", "dt": 0.05}, f)
    rc, _, err = run("simulate", "--config", bad)
    check("CFL violation exits 2", rc == 2 and "CFL" in err, err.strip())

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
