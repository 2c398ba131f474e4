"""Validates the shipped configs and a build manifest against schema/config.schema.json."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
import yaml

root = pathlib.Path(sys.argv[1])
tgf = sys.argv[2]
schema = json.loads((root / "schema" / "config.schema.json").read_text())
validator = jsonschema.Draft202012Validator(schema)

failures = 0
for path in sorted((root / "configs").glob("*.yaml")):
    errors = list(validator.iter_errors(yaml.safe_load(path.read_text())))
    should_fail = path.stem == "bad_key"
    if bool(errors) != should_fail:
        failures += 1
        print(f"{path.name}: expected {'errors' if should_fail else 'valid'}, got {[e.message for e in errors]}")

with tempfile.TemporaryDirectory() as out:
    subprocess.run([tgf, "export", str(root / "configs" / "ruled_helicoid.yaml"), "--format", "json", "-o", out],
                   check=True, stdout=subprocess.DEVNULL)
    manifest = json.loads((pathlib.Path(out) / "ruled_helicoid.json").read_text())
    for e in validator.iter_errors(manifest["config"]):
        failures += 1
        print(f"manifest config: {e.message}")

print("schema failures:", failures)
sys.exit(1 if failures else 0)
