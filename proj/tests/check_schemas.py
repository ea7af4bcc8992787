"""Validate compsemi JSON output against the published schemas."""
import json
import pathlib
import subprocess
import sys

import jsonschema

RUNS = [
    ("verification", ["verify-measure"]),
    ("verification", ["verify", "--identity", "sech"]),
    ("spectrum", ["spectrum", "--s", "0.25", "--N", "200", "--ell", "1,2,5"]),
    ("joint", ["joint", "--q", "1,3/2"]),
    ("joint", ["joint", "--q", "1,2,3"]),
    ("symbol", ["symbol", "C(0.25)"]),
    ("symbol", ["symbol", "C(0.25)", "--inclusion", "--N", "20"]),
]


def main():
    binary = sys.argv[1]
    schema_dir = pathlib.Path(sys.argv[2])
    failures = 0
    for schema_name, args in RUNS:
        schema = json.loads((schema_dir / f"{schema_name}.schema.json").read_text())
        proc = subprocess.run([binary, *args], capture_output=True, text=True)
        label = " ".join(args)
        if proc.returncode not in (0, 1):
            print(f"FAIL {label}: exit code {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        try:
            jsonschema.validate(json.loads(proc.stdout), schema)
            print(f"ok   {label}")
        except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
            print(f"FAIL {label}: {exc}")
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
