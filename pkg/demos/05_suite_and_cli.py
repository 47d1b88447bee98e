"""Running a full experiment suite and reading its reports.

Writes a JSON config, runs the suite through the library API, and shows the
artifacts (CSV per experiment, JSON summary, digest manifest).  The same thing
is available from the shell:

    widthlab run --config suite.json --out results --parallelism 4
    widthlab report --out results
    widthlab estimate --body '{"kind": "l2", "dim": 100, "radius": 1.0}'
    widthlab check --body '{"kind": "l1", "dim": 8, "radius": 1.0}' --cube-side 0.1
"""

import json
import pathlib
import tempfile

from widthlab import parse_config, run_suite, summarize

suite = [
    {"kind": "jl", "id": "jl-demo", "n": 60, "N": 150, "trials": 8,
     "h_count": 12, "master_seed": 42},
    {"kind": "dvoretzky", "id": "dv-demo", "n": 300, "eps": 0.25, "N": 15,
     "trials": 8, "mc_samples": 4000, "master_seed": 42},
    {"kind": "rearrangement", "id": "rearr-demo", "n": 24, "N": 12,
     "trials": 2, "vertex_count": 50, "mc_samples": 2000, "master_seed": 42},
]

with tempfile.TemporaryDirectory() as tmp:
    cfg_path = pathlib.Path(tmp) / "suite.json"
    cfg_path.write_text(json.dumps(suite, indent=2))
    out = pathlib.Path(tmp) / "results"

    manifest = run_suite(parse_config(str(cfg_path)), str(out), parallelism=2)
    print("verdicts:", manifest.verdicts)
    print("files written:")
    for name, digest in manifest.files.items():
        print(f"  {name}  sha256:{digest[:16]}...")

    print("\nfirst lines of jl-demo.csv:")
    for line in (out / "jl-demo.csv").read_text().splitlines()[:3]:
        print(" ", line)

    print("\nsummarize() re-verifies every digest:",
          summarize(str(out))["integrity"])
