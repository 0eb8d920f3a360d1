"""Validate tropsolve JSON files against the schemas in this directory."""

import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource

HERE = pathlib.Path(__file__).parent
SCHEMAS = {p.name.removesuffix(".schema.json"): json.loads(p.read_text()) for p in HERE.glob("*.schema.json")}
REGISTRY = Registry().with_resources((k, Resource.from_contents(v)) for k, v in SCHEMAS.items())


def schema_of(doc):
    if "schema" in doc:
        return doc["schema"]
    return "problem.v1"


def main(paths):
    failed = 0
    for path in paths:
        doc = json.loads(pathlib.Path(path).read_text())
        name = schema_of(doc)
        if name not in SCHEMAS:
            print(f"{path}: no schema for {name!r}")
            failed += 1
            continue
        errors = list(jsonschema.Draft202012Validator(SCHEMAS[name], registry=REGISTRY).iter_errors(doc))
        for e in errors:
            print(f"{path}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
        failed += bool(errors)
        if not errors:
            print(f"{path}: ok ({name})")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
