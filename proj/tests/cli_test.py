#!/usr/bin/env python3
# End-to-end checks of the forge CLI: exit codes, outputs, env override.
# usage: cli_test.py path/to/forge
import filecmp
import json
import os
import shutil
import subprocess
import sys
import tempfile

forge = os.path.abspath(sys.argv[1])
failures = []


def run(*args, env=None, cwd=None):
    e = dict(os.environ)
    e.pop("FORGE_OUT_DIR", None)
    e.update(env or {})
    p = subprocess.run([forge, *args], capture_output=True, text=True, env=e, cwd=cwd)
    return p.returncode, p.stdout + p.stderr


def expect(name, ok, extra=""):
    print(("ok   " if ok else "FAIL ") + name + (": " + extra if extra and not ok else ""))
    if not ok:
        failures.append(name)


with tempfile.TemporaryDirectory() as tmp:
    a, b = os.path.join(tmp, "a"), os.path.join(tmp, "b")

    rc, out = run("--out", a, "evolve", "--stages", "2")
    expect("evolve exits 0", rc == 0, out)
    for f in ("schedule.json", "run.json", "stage-1.json", "stage-2.json", "codeball-2.json", "diff-2.json"):
        expect("evolve writes " + f, os.path.isfile(os.path.join(a, f)))
    expect("no temp files left", not [f for f in os.listdir(a) if not f.endswith(".json")], str(os.listdir(a)))

    rc, out = run("--out", b, "--jobs", "3", "evolve", "--stages", "2")
    same = sorted(os.listdir(a)) == sorted(os.listdir(b))
    _, mismatch, errors = filecmp.cmpfiles(a, b, os.listdir(a), shallow=False)
    expect("--jobs 3 gives identical files", rc == 0 and same and not mismatch and not errors, str(mismatch))

    before = {f: open(os.path.join(a, f), "rb").read() for f in os.listdir(a)}
    rc, out = run("--out", a, "evolve", "--stages", "2")
    after = {f: open(os.path.join(a, f), "rb").read() for f in os.listdir(a)}
    expect("resumed evolve is byte-identical", rc == 0 and before == after, out)

    rc, out = run("--out", a, "verify")
    expect("verify passes", rc == 0, out)
    cert = json.load(open(os.path.join(a, "certificates.json")))
    expect("certificates.json records a pass", cert.get("pass") is True, str(cert)[:300])

    sched = json.load(open(os.path.join(a, "schedule.json")))
    st = sched["schedule"]["stages"] if "schedule" in sched else sched["stages"]
    expect("big integers are decimal strings", all(isinstance(r["r"], str) and isinstance(r.get("kappa", r.get("kappa_expr")), str) for r in st))

    # corrupt one label: the center takes its neighbour's first-layer color
    bad = os.path.join(tmp, "bad")
    os.mkdir(bad)
    lines = open(os.path.join(a, "stage-2.json")).read().split("\n")
    k = lines.index('  "labels": [')
    c, n = json.loads(lines[k + 1].rstrip(",")), json.loads(lines[k + 2].rstrip(","))
    c[2] = n[2]
    lines[k + 1] = "    " + json.dumps(c, separators=(",", ":")) + ","
    open(os.path.join(bad, "stage-2.json"), "w").write("\n".join(lines))
    shutil.copy(os.path.join(a, "codeball-2.json"), bad)
    rc, out = run("--out", bad, "verify", os.path.join(bad, "stage-2.json"))
    expect("corrupted label fails verification with 1", rc == 1, out)

    rc, out = run("--out", tmp, "verify", os.path.join(tmp, "nowhere", "stage-9.json"))
    expect("missing snapshot exits 2", rc == 2, out)

    trunc = os.path.join(tmp, "trunc.json")
    open(trunc, "w").write(open(os.path.join(a, "stage-1.json")).read()[:5000])
    rc, out = run("--out", tmp, "verify", trunc)
    expect("truncated snapshot exits 2", rc == 2, out)

    rc, out = run("--out", tmp, "schedule", "--group", "Z2sum", "--stages", "2")
    expect("infeasible schedule exits 2", rc == 2 and "Infeasible" in out, out)

    rc, out = run("--out", tmp, "evolve", "--stages", "3", "--s1", "50")
    expect("oversized window is refused with 2", rc == 2, out)

    rc, out = run("--out", tmp, "bogus")
    expect("unknown subcommand exits 2", rc == 2, out)
    rc, out = run("--help")
    expect("help exits 0", rc == 0 and "evolve" in out, out)

    rc, out = run("--out", tmp, "schedule", "--mode", "exact", "--stages", "2")
    row = [l for l in out.splitlines() if l.startswith("1\t")]
    expect("exact schedule row", rc == 0 and row and row[0].split("\t")[:5] == ["1", "10", "1", "5050", "10102"], out[:400])

    env_dir = os.path.join(tmp, "env")
    rc, out = run("schedule", env={"FORGE_OUT_DIR": env_dir}, cwd=tmp)
    expect("FORGE_OUT_DIR picks the output directory", rc == 0 and os.path.isfile(os.path.join(env_dir, "schedule.json")), out)
    flag_dir = os.path.join(tmp, "flag")
    rc, out = run("--out", flag_dir, "schedule", env={"FORGE_OUT_DIR": os.path.join(tmp, "unused")})
    expect("--out wins over FORGE_OUT_DIR", rc == 0 and os.path.isfile(os.path.join(flag_dir, "schedule.json"))
           and not os.path.exists(os.path.join(tmp, "unused")), out)

    rc, out = run("--out", a, "render", os.path.join(a, "stage-2.json"), "--layer", "1", "--from", "-20", "--to", "20")
    txt = [f for f in os.listdir(a) if f.startswith("render-stage-2-layer-1") and f.endswith(".txt")]
    expect("render text", rc == 0 and txt, out)
    rc, out = run("--out", a, "render", os.path.join(a, "stage-2.json"), "--format", "ppm")
    expect("ppm render of Z exits 2", rc == 2, out)
    rc, out = run("--out", a, "census", os.path.join(a, "stage-1.json"), "--j", "1", "--t", "1")
    csv = [f for f in os.listdir(a) if f.startswith("census-stage-1") and f.endswith(".csv")]
    expect("census csv", rc == 0 and csv, out)

print("%d failures" % len(failures))
sys.exit(1 if failures else 0)
