"""Runs every subcommand and validates each emitted JSON file against schemas/."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

toral, root = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
schemas = {p.name: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}
registry = Registry().with_resources((name, Resource.from_contents(s)) for name, s in schemas.items())
checker = jsonschema.FormatChecker()


def validate(doc, schema_name):
    cls = jsonschema.validators.validator_for(schemas[schema_name])
    cls(schemas[schema_name], registry=registry, format_checker=checker).validate(doc)


inputs = root / "inputs"
validate(json.loads((inputs / "cat_map.json").read_text()), "matrix.schema.json")
validate(json.loads((inputs / "paper_matrix.json").read_text()), "matrix.schema.json")
for name in ["cosine2", "cosine4", "coboundary", "leonov", "product_decay"]:
    validate(json.loads((inputs / f"{name}.json").read_text()), "observable.schema.json")

cat, cos, cob = str(inputs / "cat_map.json"), str(inputs / "cosine2.json"), str(inputs / "coboundary.json")
runs = [
    (["classify", str(inputs / "paper_matrix.json")], {0}),
    (["classify", "2,0;0,1"], {2}),
    (["sigma2", cat, cos, "--partial", "1,10"], {0}),
    (["sigma2", "1,0;0,1", cos], {3}),
    (["check", str(inputs / "leonov.json"), "--theta", "1.2"], {0}),
    (["check", str(inputs / "product_decay.json"), "--theta", "1.2"], {4}),
    (["simulate", cat, cos, "--n", "50", "--samples", "400", "--lags", "0,1"], {0, 5}),
    (["clt", cat, cos, "--n", "100", "--samples", "400"], {0, 5}),
    (["clt", cat, cob, "--n", "100", "--samples", "400"], {6}),
    (["scaling", cat, cos, "--grid", "10,100,1000,10000", "--samples", "50"], {0, 5}),
    (["orbit", cat, cos, "--n", "10", "--states"], {0}),
]
report_schema = {
    "classification.json": "classification.schema.json",
    "variance.json": "variance.schema.json",
    "conditions.json": "conditions.schema.json",
    "variance_growth.json": "variance_growth.schema.json",
    "decorrelation.json": "decorrelation.schema.json",
    "clt.json": "clt.schema.json",
    "scaling.json": "scaling.schema.json",
}
checked = 0
for args, codes in runs:
    with tempfile.TemporaryDirectory() as out:
        proc = subprocess.run([str(toral), *args, "--out", out], capture_output=True, text=True)
        assert proc.returncode in codes, f"{args}: exit {proc.returncode}\n{proc.stderr}"
        manifest = json.loads((pathlib.Path(out) / "manifest.json").read_text())
        validate(manifest, "manifest.schema.json")
        assert manifest["exit_code"] == proc.returncode
        for entry in manifest["outputs"]:
            if entry["path"] in report_schema:
                validate(json.loads((pathlib.Path(out) / entry["path"]).read_text()), report_schema[entry["path"]])
                checked += 1
print(f"validated {checked} reports and {len(runs)} manifests")
