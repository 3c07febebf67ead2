"""Black-box checks of the affinekit binary: schemas, manifests, exit codes, determinism.

usage: cli_checks.py <affinekit binary> <source dir> <schemas|smoke|determinism>
"""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

BIN, SRC, MODE = sys.argv[1], pathlib.Path(sys.argv[2]), sys.argv[3]

SCHEMA_FOR = {
    "torus": "group", "z2z2": "group", "atlas": "atlas", "variation": "leaf",
    "monodromy": "periods", "system": "system", "cech": "nerve", "circle": "nerve",
    "cochain": "cochain", "dd": "cech-bundle", "chern": "cech-bundle",
}


def run(*args, check=True):
    p = subprocess.run([BIN, *args], capture_output=True, text=True)
    if check and p.returncode != 0:
        raise SystemExit(f"{' '.join(args)} exited {p.returncode}: {p.stderr}")
    return p


def registry():
    reg = Registry()
    for f in (SRC / "schemas").glob("*.schema.json"):
        doc = json.loads(f.read_text())
        reg = reg.with_resource(doc["$id"], Resource.from_contents(doc))
        reg = reg.with_resource(f.name, Resource.from_contents(doc))
    return reg


def validator(name, reg):
    doc = json.loads((SRC / "schemas" / f"{name}.schema.json").read_text())
    return jsonschema.Draft202012Validator(doc, registry=reg)


def schemas():
    reg = registry()
    files = sorted((SRC / "cookbook").glob("*.json"))
    assert files, "no cookbook inputs"
    for f in files:
        kinds = [v for k, v in SCHEMA_FOR.items() if f.name.startswith(k)]
        assert kinds, f"no schema mapping for {f.name}"
        validator(kinds[0], reg).validate(json.loads(f.read_text()))
    # the shipped inputs must match what the binary would write
    with tempfile.TemporaryDirectory() as d:
        run("cookbook", "inputs", d)
        for f in pathlib.Path(d).glob("*.json"):
            assert f.read_text() == (SRC / "cookbook" / f.name).read_text(), f"{f.name} is stale"
        out = pathlib.Path(d) / "r.json"
        run("group", "analyze", str(SRC / "cookbook" / "torus2-analyze.json"), "--out", str(out))
        validator("manifest", reg).validate(json.loads(pathlib.Path(str(out) + ".manifest.json").read_text()))
    print(f"validated {len(files)} inputs and a manifest")


def smoke():
    r = json.loads(run("group", "analyze", str(SRC / "cookbook" / "torus2-analyze.json")).stdout)
    assert r["translational_rank"] == 1, r
    assert r["translational_basis"] == [["1", "0"]], r
    w = json.loads(run("measure", "weyl", "--samples", "1e6", "--seed", "7").stdout)
    assert w["relative_error"] < 0.01, w
    listed = json.loads(run("cookbook", "list").stdout)["scenarios"]
    assert len(listed) >= 12, len(listed)
    # exit codes: 2 for malformed input (with a schema excerpt), 3 for a failed computation
    with tempfile.TemporaryDirectory() as d:
        bad = pathlib.Path(d) / "bad.json"
        bad.write_text("{}")
        p = run("group", "analyze", str(bad), check=False)
        assert p.returncode == 2 and "expected input" in p.stderr, (p.returncode, p.stderr)
    p = run("realization", "periods", "--system", "free_particle", "--base", "[1.0]", check=False)
    assert p.returncode == 3, (p.returncode, p.stderr)
    p = run("no-such-command", check=False)
    assert p.returncode == 2, p.returncode
    csv_ok = False
    with tempfile.TemporaryDirectory() as d:
        csv = pathlib.Path(d) / "h.csv"
        run("measure", "dh", "--samples", "20000", "--bins", "4", "--csv", str(csv))
        lines = csv.read_bytes().split(b"\r\n")
        csv_ok = lines[0] == b"bin_lo,bin_hi,mass,stderr" and len([l for l in lines if l]) == 5
    assert csv_ok, "CSV layout"
    print("smoke ok")


def determinism():
    with tempfile.TemporaryDirectory() as d:
        outs = []
        for threads in ("1", "3", "1"):
            out = pathlib.Path(d) / f"t{threads}-{len(outs)}.json"
            run("cookbook", "run", "--all", "--seed", "5", "--threads", threads, "--out", str(out))
            m = json.loads(pathlib.Path(str(out) + ".manifest.json").read_text())
            m.pop("runtime")
            outs.append((out.read_bytes(), m))
        assert outs[0][0] == outs[1][0] == outs[2][0], "cookbook output depends on thread count"
        assert outs[0][1] == outs[1][1] == outs[2][1], "manifests differ beyond runtime"
        assert json.loads(outs[0][0])["pass"], "a cookbook scenario failed"
    print("deterministic across thread counts")


{"schemas": schemas, "smoke": smoke, "determinism": determinism}[MODE]()
