#!/usr/bin/env python3
"""End-to-end checks of the c1k binary: exit codes, reports, schemas, goldens."""

import argparse
import json
import math
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

HERE = pathlib.Path(__file__).resolve().parent


class Suite:
    def __init__(self, c1k, schemas, golden, work):
        self.c1k = str(pathlib.Path(c1k).resolve())
        self.work = work
        self.golden = golden
        self.failures = []
        self.validators = {}
        resources = []
        for p in sorted(schemas.glob("*.json")):
            doc = json.loads(p.read_text())
            resources.append((doc["$id"], Resource.from_contents(doc)))
        registry = Registry().with_resources(resources)
        for uri, res in resources:
            name = uri.rsplit("/", 1)[1][: -len(".json")]
            self.validators[name] = jsonschema.Draft202012Validator(res.contents, registry=registry)

    def run(self, *args, code=0, env=None):
        proc = subprocess.run([self.c1k, *map(str, args)], capture_output=True, text=True, cwd=self.work, env=env)
        if proc.returncode != code:
            raise AssertionError(f"{' '.join(map(str, args))}: exit {proc.returncode}, expected {code}\n{proc.stderr}")
        return proc

    def report(self, *args, code=0):
        out = self.run(*args, code=code).stdout
        doc = json.loads(out)
        self.validate("report", doc)
        return doc

    def validate(self, schema, doc):
        errors = sorted(self.validators[schema].iter_errors(doc), key=str)
        if errors:
            raise AssertionError(f"{schema} schema: {errors[0].message} at {list(errors[0].absolute_path)}")

    def doc(self, name, schema):
        d = json.loads((self.work / name).read_text())
        self.validate(schema, d)
        return d

    def case(self, name, fn):
        try:
            fn()
            print(f"PASS {name}")
        except Exception as e:  # noqa: BLE001 - report every failure and keep going
            print(f"FAIL {name}: {e}")
            self.failures.append(name)


def close(a, b, rel=1e-9):
    """Structural equality with a relative tolerance on floats."""
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(close(a[k], b[k], rel) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(close(x, y, rel) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        if not isinstance(a, (int, float)) or not isinstance(b, (int, float)):
            return False
        return math.isclose(a, b, rel_tol=rel, abs_tol=1e-300)
    return a == b


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--c1k", required=True)
    ap.add_argument("--schemas", required=True, type=pathlib.Path)
    ap.add_argument("--golden", type=pathlib.Path, default=HERE.parent / "golden")
    ap.add_argument("--update-golden", action="store_true")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        work = pathlib.Path(tmp)
        s = Suite(args.c1k, args.schemas, args.golden, work)

        def build_sets():
            s.run("set", "build", "--spec", "geometric", "--param", "a=2", "--out", "geometric-a2.json")
            s.run("set", "build", "--spec", "power", "--param", "p=1", "--out", "power-p1.json")
            s.run("set", "build", "--spec", "cantor", "--param", "level=8", "--out", "cantor.json")
            s.run("set", "build", "--spec", "square", "--h", "0.0625", "--out", "square.json")
            s.run("set", "build", "--spec", "annulus", "--h", "0.0625", "--out", "annulus.json")
            for n in ("geometric-a2", "power-p1", "cantor"):
                s.doc(f"{n}.json", "compact_set_1d")
            for n in ("square", "annulus"):
                s.doc(f"{n}.json", "raster_set_2d")

        s.case("set build writes schema-valid documents", build_sets)

        def equality_geometric():
            r = s.report("decide-equality", "--set", "geometric-a2.json")
            assert r["result"]["verdict"] == "Equal", r["result"]
            assert r["command"] == "decide-equality"
            assert r["inputs"][0]["name"] == "geometric-a2.json"

        s.case("decide-equality on geometric a=2 is Equal", equality_geometric)

        def sauter():
            r = s.report("gallery", "run", "sauter")
            checks = {c["id"]: c for c in r["result"]["checks"]}
            assert checks["ftc_defect"]["measured"] == 1.0
            assert r["result"]["passed"]
            s.validate("gallery_report", r["result"])

        s.case("gallery run sauter reports an FTC defect of 1", sauter)

        def sigma_power_strict():
            r = s.report("--strict", "sigma", "--set", "power-p1.json", "--xi", "0")
            assert r["result"]["verdict"]["kind"] == "Infinite"

        s.case("sigma on power p=1 with --strict is decisive", sigma_power_strict)

        def sigma_geometric():
            r = s.report("sigma", "--set", "geometric-a2.json", "--xi", "0")
            v = r["result"]["verdict"]
            assert v["kind"] == "Finite" and 1.99 <= v["upper"] <= 2.01, v

        s.case("sigma on geometric a=2 is 2", sigma_geometric)

        def strict_inconclusive():
            (work / "loose.json").write_text(json.dumps({"sigma_policy": {"threshold": 1e300}}))
            s.report("--config", "loose.json", "sigma", "--set", "power-p1.json", "--xi", "0")
            r = s.report("--config", "loose.json", "--strict", "sigma", "--set", "power-p1.json", "--xi", "0", code=3)
            assert r["result"]["verdict"]["kind"] == "Inconclusive"

        s.case("--strict maps Inconclusive to exit 3", strict_inconclusive)

        def usage_errors():
            s.run("frobnicate", code=64)
            s.run("sigma", "--set", "power-p1.json", code=64)  # missing --xi
            s.run("sigma", "--set", "no-such-file.json", "--xi", "0", code=64)
            s.run("metric", "geodesic", "--set", "square.json", "--source", "0.5,0.5", "--order", "12", code=64)
            s.run("--help")

        s.case("usage errors exit 64", usage_errors)

        def parse_errors():
            (work / "broken.json").write_text("{\"type\": ")
            s.run("sigma", "--set", "broken.json", "--xi", "0", code=65)
            s.run("--config", "broken.json", "gallery", "list", code=65)

        s.case("malformed JSON exits 65", parse_errors)

        def contract_errors():
            s.run("sigma", "--set", "geometric-a2.json", "--xi", "0.3", code=2)
            s.run("metric", "geodesic", "--set", "square.json", "--source", "5,5", code=2)
            s.run("gallery", "run", "teapot", code=2)

        s.case("contract violations exit 2", contract_errors)

        def deterministic():
            a = s.run("gallery", "run", "geometric").stdout
            b = s.run("gallery", "run", "geometric").stdout
            assert a == b
            s.run("--json", "one.json", "metric", "geodesic", "--set", "annulus.json", "--source", "0.75,0",
                  "--target", "-0.75,0")
            s.run("metric", "geodesic", "--set", "annulus.json", "--source", "0.75,0", "--target", "-0.75,0",
                  "--json", "two.json")
            assert (work / "one.json").read_bytes() == (work / "two.json").read_bytes()
            s.validate("report", json.loads((work / "one.json").read_text()))

        s.case("identical inputs give byte-identical reports", deterministic)

        def geodesic():
            r = s.report("metric", "geodesic", "--set", "square.json", "--source", "0.03,0.03", "--target", "0.97,0.6")
            t = r["result"]["target"]
            assert 1.0 <= t["ratio"] <= 1.03, t
            r = s.report("metric", "geodesic", "--set", "annulus.json", "--source", "0.75,0", "--target", "-0.75,0")
            assert r["result"]["target"]["distance"] > math.pi * 0.5

        s.case("metric geodesic", geodesic)

        def completeness():
            r = s.report("metric", "completeness", "--set", "square.json")
            assert r["result"]["verdict"] == "Complete", r["result"]
            s.run("set", "build", "--spec", "isolated_sequence", "--param", "depth=30", "--out", "iso.json")
            r = s.report("metric", "completeness", "--set", "iso.json")
            assert r["result"]["verdict"] == "Incomplete", r["result"]

        s.case("metric completeness", completeness)

        def regularity():
            r = s.report("metric", "regularity", "--set", "square.json", "--mode", "pointwise", "--point", "0.5,0.5",
                         "--delta", "0.25", "--refinements", "1")
            assert len(r["result"]["series"]) == 2
            assert all(v <= 1.03 for v in r["result"]["series"])

        s.case("metric regularity on the square", regularity)

        def counterexample_and_jets():
            s.run("counterexample", "--set", "power-p1.json", "--xi", "0", "--windows", "6", "--out", "ce.json")
            s.doc("ce.json", "jet")
            r = s.report("jet", "norms", "--jet", "ce.json")
            assert r["result"]["lip"] >= 1.0
            r = s.report("jet", "verify", "--jet", "ce.json", "--ladder", "5")
            assert len(r["result"]["ladder"]) == 5
            (work / "aff.csv").write_text("x,y,f,dfx,dfy\n" + "".join(
                f"{x / 4},{y / 4},{1 + x / 4 - y / 4},1,-1\n" for x in range(5) for y in range(5)))
            r = s.report("jet", "extend", "--jet", "aff.csv", "--mode", "pou", "--rho", "0.25")
            assert r["result"]["sup_f_error"] < 1e-12 and r["result"]["sup_df_error"] < 1e-12, r["result"]
            s.run("jet", "extend", "--jet", "aff.csv", "--mode", "pou", "--rho", "0.25", "--r", "2", code=64)

        s.case("counterexample and jet commands", counterexample_and_jets)

        def path_integrate():
            (work / "loop.json").write_text(json.dumps(
                {"type": "polyline", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]}))
            s.doc("loop.json", "polyline")
            r = s.report("path", "integrate", "--field", "rotation", "--path", "loop.json")
            assert math.isclose(r["result"]["value"], 2.0, rel_tol=1e-12)
            r = s.report("path", "integrate", "--field", "gradient-xy", "--path", "loop.json", "--levels", "8")
            assert abs(r["result"]["value"]) < 1e-12
            s.run("path", "integrate", "--field", "spiral", "--path", "loop.json", code=64)

        s.case("path integrate", path_integrate)

        def charges():
            (work / "walk.json").write_text(json.dumps(
                {"type": "polyline", "vertices": [[0.5, 0.5], [3.5, 0.5], [3.5, 2.5], [1.5, 2.5]]}))
            s.run("charge", "from-path", "--path", "walk.json", "--grid", "0,0,1,4,3", "--out", "t.json")
            s.doc("t.json", "grid_charge")
            for mode in ("exact", "float"):
                s.run("charge", "decompose", "--in", "t.json", "--mode", mode, "--out", f"d-{mode}.json")
                s.doc(f"d-{mode}.json", "path_decomposition")
                r = s.report("charge", "check", "--decomposition", f"d-{mode}.json", "--against", "t.json")
                assert r["result"]["pass"], r["result"]
            r = s.report("charge", "check", "--decomposition", "d-exact.json", "--against", "t.json")
            assert r["result"]["identity_residual"] == 0.0
            r = s.report("charge", "info", "--in", "t.json")
            assert r["command"] == "charge info"

        s.case("charge pipeline", charges)

        def gallery_goldens():
            listing = s.report("gallery", "list")
            ids = [e["id"] for e in listing["result"]]
            assert ids == sorted(ids) and len(ids) >= 9
            args.golden.mkdir(parents=True, exist_ok=True)
            for ex in ids:
                r = s.report("gallery", "run", ex, "--check")
                s.validate("gallery_report", r["result"])
                path = args.golden / f"gallery_{ex}.json"
                if args.update_golden:
                    path.write_text(json.dumps(r, indent=2, sort_keys=True) + "\n")
                    continue
                assert path.exists(), f"missing golden {path.name}; rerun with --update-golden"
                assert close(r, json.loads(path.read_text())), f"{ex} differs from {path.name}"

        s.case("gallery reports match the stored goldens", gallery_goldens)

        def gallery_build():
            s.run("gallery", "build", "product", "--param", "depth=8", "--out", "prod.json")
            d = json.loads((work / "prod.json").read_text())
            assert d["id"] == "product"
            s.validate("raster_set_2d", d["raster"])
            s.run("gallery", "run", "geometric", "--param", "a=1", code=2)

        s.case("gallery build", gallery_build)

        def config_echo():
            (work / "cfg.json").write_text(json.dumps({"tolerance": 1e-6, "order": 8}))
            s.validate("config", json.loads((work / "cfg.json").read_text()))
            a = s.report("--config", "cfg.json", "gallery", "list")
            b = s.report("gallery", "list")
            assert a["config"]["order"] == 8 and a["config"]["tolerance"] == 1e-6
            assert a["config_hash"] != b["config_hash"]

        s.case("config is echoed and hashed", config_echo)

        def budget_env():
            import os
            env = dict(os.environ, C1K_CELL_BUDGET="100")
            s.run("set", "build", "--spec", "square", "--h", "0.01", env=env, code=2)

        s.case("cell budget environment override", budget_env)

    print(f"{len(s.failures)} failure(s)")
    return 1 if s.failures else 0


if __name__ == "__main__":
    sys.exit(main())
