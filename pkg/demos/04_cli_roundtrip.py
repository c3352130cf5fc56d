"""Drive the command-line tool end to end from Python.

Generates a random pair, verifies it, lifts it, and shows a hypothesis gate
turning into exit status 2.  The same commands work from a shell as
``qlift gen ...`` once the package is installed.
Run:  python3 demos/04_cli_roundtrip.py
"""
import io
import json
import tempfile
from pathlib import Path

from qlift.cli import main


def run(*args):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(args), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


with tempfile.TemporaryDirectory() as tmp:
    pair = str(Path(tmp) / "pair.json")
    print("gen    ->", run("gen", "--family", "random", "--q", "0.8@45", "--dim", "3",
                          "--seed", "1", "-o", pair)[0])
    code, out, _ = run("verify", "--input", pair)
    print("verify ->", code, json.loads(out)["checks"][0])
    code, out, _ = run("lift", "--engine", "coiso", "--depth", "4", "--input", pair)
    doc = json.loads(out)
    print("lift   ->", code, f"{len(doc['checks'])} checks, norms {doc['norms']}")
    code, _, err = run("lift", "--q", "5,0", "--input", pair)
    print("lift with q = 5 ->", code, err.strip())
