#!/usr/bin/env python3
"""Run a few CLI commands and validate their JSON against schemas/qhflow.schema.json."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    exe, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    def sub(name):
        return jsonschema.Draft202012Validator({"$ref": f"#/$defs/{name}", "$defs": schema["$defs"]})

    failures = 0

    def check(v, doc, label):
        nonlocal failures
        errs = sorted(v.iter_errors(doc), key=lambda e: list(e.path))
        if errs:
            failures += 1
            print(f"FAIL {label}: {errs[0].message} at {list(errs[0].path)}")
        else:
            print(f"ok   {label}")

    def run(*args):
        out = subprocess.run([exe, *args], capture_output=True, text=True, check=True)
        return json.loads(out.stdout)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        div = run("divergent")
        series = div["result"]["series"]
        check(sub("series"), series, "divergent series")
        (tmp / "series.json").write_text(json.dumps(series))
        (tmp / "grid.json").write_text(json.dumps([[[0.1, 0], [0.2, 0]], [[0.3, 0.1], [0, 0]]]))

        (tmp / "lam.json").write_text(json.dumps(
            {"basis": [{"name": "tau", "approx": 2 ** 0.5}], "entries": [["1", "0"], ["0", "1"]]}))

        docs = {
            "rho": run("rho", "--lambda", "1,2", "--cap", "4"),
            "rho irrational": run("rho", "--lambda", str(tmp / "lam.json"), "--cap", "2"),
            "deps": run("deps", "--lambda", "1,3/2,2"),
            "deps independent": run("deps", "--lambda", str(tmp / "lam.json")),
            "flow": run("flow", "--lambda", "1,2", "--point", "1,1", "--t", "0.5"),
            "psi": run("psi", "--lambda", "1,1", "--set", "builtin:ball:60", "--point", "2,0", "--cap", "2"),
            "green certified": run("green", "--dim", "1", "--set", "builtin:sphere:32", "--point", "2",
                                   "--degree-cap", "3", "--mode", "certified"),
            "region": run("region", "--kind", "convergence", "--series", str(tmp / "series.json"),
                          "--grid", str(tmp / "grid.json")),
            "divergent": div,
            "examples": run("examples", "ex3.5"),
        }
        for label, doc in docs.items():
            check(validator, doc, label)

        # malformed documents must be rejected
        bad = json.loads(json.dumps(docs["rho"]))
        bad["result"]["entries"][0]["multiplicity"] = 0
        if validator.is_valid(bad):
            failures += 1
            print("FAIL schema accepted a zero multiplicity")
        if validator.is_valid({"command": "rho"}):
            failures += 1
            print("FAIL schema accepted a missing result")

    print(f"{failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
