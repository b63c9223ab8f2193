"""Runs rigged-diag on each config and validates the JSON report against the schema."""
import json
import subprocess
import sys
from pathlib import Path

import jsonschema


def main() -> int:
    tool, schema_path, *configs = sys.argv[1:]
    schema = json.loads(Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failed = 0
    for cfg in configs:
        out = subprocess.run([tool, "--config", cfg], check=True,
                             capture_output=True, text=True).stdout
        errors = list(validator.iter_errors(json.loads(out)))
        for e in errors:
            print(f"{cfg}: {'/'.join(map(str, e.path))}: {e.message}")
        failed += bool(errors)
        print(f"{cfg}: {'ok' if not errors else 'INVALID'}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
