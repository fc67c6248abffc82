"""Validate report.json and manifest.json files against the shipped schemas."""
import json
import pathlib
import sys

import jsonschema


def main() -> int:
    schemas = pathlib.Path(sys.argv[1])
    root = pathlib.Path(sys.argv[2])
    validators = {
        name: jsonschema.Draft202012Validator(json.loads((schemas / f"{name}.schema.json").read_text()))
        for name in ("report", "manifest")
    }
    checked = 0
    failures = 0
    for name, validator in validators.items():
        for path in sorted(root.rglob(f"{name}.json")):
            checked += 1
            for error in validator.iter_errors(json.loads(path.read_text())):
                failures += 1
                print(f"{path}: {'/'.join(map(str, error.absolute_path))}: {error.message}")
    print(f"{checked} files checked, {failures} schema violations")
    return 0 if checked > 0 and failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
