"""Run every subcommand once and validate its JSON lines against the schema."""
import json
import subprocess
import sys

import jsonschema

binary, schema_path = sys.argv[1], sys.argv[2]
validator = jsonschema.Draft202012Validator(json.load(open(schema_path)))

runs = [
    ["classify", "x^2-x-1"],
    ["classify", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"],
    ["classify", "x^2-1"],
    ["dn", "2,-3", "--nmax", "8", "--timing"],
    ["level", "x^3-x-1", "--n", "4", "--alphabet", "-101"],
    ["gaps", "x^2-x-1", "--nmax", "7"],
    ["gap-reduction", "x^2-3", "--nmax", "4"],
    ["entropy", "x^3-x-2", "--nmax", "7"],
    ["measure", "x^2-x-1", "--n", "4", "--depth", "12"],
    ["interval", "x^3-x-1", "--left", "0", "--right", "0101", "--depth", "10"],
    ["branching", "x^2-x-1", "--samples", "2", "--N", "14", "--nmax", "6"],
    ["branching", "2,-3", "--x", "0110", "--nmax", "4"],
    ["density", "x^2-x-1", "--points", "0,mid,T", "--m", "2,4"],
    ["traces", "x^3-x-1", "--N", "10"],
    ["salem-sums", "x^4-x^3-x^2-x+1", "--N", "10"],
    ["reduce", "x^2-3", "--max-steps", "1"],
    ["traces", "2,-3"],
]

failures = 0
for args in runs:
    proc = subprocess.run([binary] + args, capture_output=True, text=True)
    lines = [l for l in proc.stdout.splitlines() if l]
    if not lines:
        print("no output:", args)
        failures += 1
        continue
    for line in lines:
        errors = list(validator.iter_errors(json.loads(line)))
        if errors:
            failures += 1
            print("invalid:", args, errors[0].message[:200], list(errors[0].absolute_path))
    last = json.loads(lines[-1])
    if (last["type"] == "error") != (proc.returncode != 0):
        failures += 1
        print("exit code mismatch:", args, proc.returncode)
print(f"{len(runs)} runs, {failures} failures")
sys.exit(1 if failures else 0)
