"""Round-trip walk specs through JSON files and drive the CLI.

Everything the library computes is reachable from the command line:
``model`` writes specs, ``validate`` checks them, ``szegedy-check``
decides and certifies, ``canonicalize``/``equiv-verify`` exercise the
typed shapes, and ``simulate`` emits CSV.  Exit codes are 0 for
yes/ok, 1 for a negative verdict, 2 for invalid input.
"""

import json
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from qwalk1d.angles import Angle
from qwalk1d.models import kitagawa_b
from qwalk1d.serialize import emit_walk_file, parse_walk_file


def cli(*args, expect=0):
    proc = subprocess.run(
        [sys.executable, "-m", "qwalk1d", *args], capture_output=True, text=True
    )
    print(f"$ qwalk1d {' '.join(args)}")
    for line in (proc.stdout or proc.stderr).strip().splitlines()[:6]:
        print(f"  {line}")
    print(f"  (exit {proc.returncode})")
    assert proc.returncode == expect, proc.stderr
    return proc.stdout


tmp = Path(tempfile.mkdtemp())

# exact coin phases serialize losslessly as fractions of pi, so the
# emit -> parse -> emit loop is byte-stable
walk = kitagawa_b({n: Angle(Fraction(n, 5)) for n in range(-2, 3)}, (-2, 2))
text = emit_walk_file(walk)
doc = json.loads(text)
print("walk document keys:", sorted(doc))
site0 = next(c for c in doc["coins"] if c["n"] == 0)
print("coin entry a at site 0:", json.dumps(site0["a"]))
assert emit_walk_file(parse_walk_file(text)) == text
print("emit/parse round trip is byte-stable\n")

ramp = tmp / "ramp.json"
ramp.write_text(text)

cli("validate", str(ramp))
print()

cert = tmp / "cert.json"
cli("szegedy-check", str(ramp), "--emit", str(cert))
print("certificate lambda:", json.dumps(json.loads(cert.read_text())["lambda"]))
print()

# a generic profile is refused with exit 1, not an error
g = tmp / "generic.json"
cli("model", "kitagawa_b", "--window=-2:2", "--omega",
    "0.4,0.1,0.9,0.2,0.75", "--emit", str(g))
cli("szegedy-check", str(g), expect=1)
print()

# canonicalize a general-form walk into shape 3, then confirm the
# conjugated walk produces the same distributions as the original
# (the periodic extension keeps the state on the ring)
gen = tmp / "general.json"
typed = tmp / "typed.json"
fam = tmp / "family.json"
cli("model", "random_general", "--seed", "6", "--window", "0:4",
    "--emit", str(gen))
cli("canonicalize", str(gen), "--to", "c3", "--emit", str(typed),
    "--emit-w", str(fam))
cli("equiv-verify", str(gen), str(fam), "--steps", "12")
print()

# the ramp walk has no extension beyond its window, so simulate only
# as far as the support can spread
cli("simulate", str(ramp), "--steps", "2")
