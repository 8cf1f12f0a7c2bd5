"""JSON formats for walks, unitary families and certificates.

Angles serialize as ``{"pi": [num, den]}`` (exact rational multiples of
pi) or ``{"rad": x}``; complex entries as ``{"re": x, "im": y}`` or in
polar form ``{"mag": m, "arg": <angle>}``.  Parsing and emission round
trip exactly: an exact angle never degrades to a float on the way
through a file, and emitting a parsed document reproduces it byte for
byte.

Walk files look like::

    {"form": "C1", "window": [-8, 8],
     "extension": {"kind": "periodic", "p": 1},
     "coins": [{"n": 0, "a": {...}, "b": {...}, "c": {...}, "d": {...}}]}

with ``"form": "general"`` specs carrying ``"sites"`` entries of four
vectors instead of ``"coins"``.  Malformed JSON raises
:class:`ParseError`, structurally wrong documents :class:`SchemaError`,
and walks whose coins fail unitarity at validation tolerance
:class:`ValidationError` (pass ``strict=False`` to let the diagnostics
command look at them anyway).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .angles import Angle
from .canonical import ShiftCoinFactorization, SiteUnitaryFamily
from .model import (
    ACCEPT_TOL,
    Amp,
    Coin2,
    ConstantTails,
    Extension,
    Periodic,
    SiteBases,
    WalkSpec,
    Window,
    WindowOnly,
)
from .szegedy import SzegedyCertificate

__all__ = [
    "ParseError",
    "SchemaError",
    "ValidationError",
    "angle_to_json",
    "angle_from_json",
    "walk_to_json",
    "walk_from_json",
    "parse_walk_file",
    "emit_walk_file",
    "dumps",
    "family_to_json",
    "family_from_json",
    "certificate_to_json",
    "certificate_from_json",
    "factorization_to_json",
]


class ParseError(ValueError):
    """The document is not JSON at all."""


class SchemaError(ValueError):
    """The document is JSON but not a well-formed walk/certificate."""


class ValidationError(ValueError):
    """The document parses but violates a mathematical requirement."""


def dumps(obj: Any) -> str:
    """Canonical emission: two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# angles and complex entries


def angle_to_json(a: Angle) -> dict:
    if a.is_exact:
        return {"pi": [a.frac.numerator, a.frac.denominator]}
    return {"rad": a.rad}


def angle_from_json(obj: Any, where: str = "angle") -> Angle:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object, got {type(obj).__name__}")
    if "pi" in obj:
        pair = obj["pi"]
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, int) for x in pair)
        ):
            raise SchemaError(f'{where}: "pi" must be [num, den] integers')
        if pair[1] == 0:
            raise SchemaError(f"{where}: zero denominator")
        return Angle(frac=Fraction(pair[0], pair[1]))
    if "rad" in obj:
        if not isinstance(obj["rad"], (int, float)):
            raise SchemaError(f'{where}: "rad" must be a number')
        return Angle.from_radians(obj["rad"])
    raise SchemaError(f'{where}: need "pi" or "rad"')


def amp_to_json(a: Amp) -> dict:
    if a.arg.is_exact:
        return {"mag": a.mag, "arg": angle_to_json(a.arg)}
    z = a.value
    return {"re": z.real, "im": z.imag}


def amp_from_json(obj: Any, where: str = "entry") -> Amp:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    if "mag" in obj or "arg" in obj:
        if "mag" not in obj or "arg" not in obj:
            raise SchemaError(f'{where}: polar form needs both "mag" and "arg"')
        mag = obj["mag"]
        if not isinstance(mag, (int, float)) or mag < 0:
            raise SchemaError(f'{where}: "mag" must be a number >= 0')
        return Amp(float(mag), angle_from_json(obj["arg"], f"{where}.arg"))
    if "re" in obj and "im" in obj:
        re, im = obj["re"], obj["im"]
        if not all(isinstance(x, (int, float)) for x in (re, im)):
            raise SchemaError(f'{where}: "re"/"im" must be numbers')
        return Amp.from_complex(complex(re, im))
    raise SchemaError(f'{where}: need "re"/"im" or "mag"/"arg"')


def _complex_to_json(z: complex) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _complex_from_json(obj: Any, where: str) -> complex:
    if (
        not isinstance(obj, dict)
        or "re" not in obj
        or "im" not in obj
        or not all(isinstance(obj[k], (int, float)) for k in ("re", "im"))
    ):
        raise SchemaError(f'{where}: expected {{"re": x, "im": y}}')
    return complex(obj["re"], obj["im"])


def _vector_to_json(v: np.ndarray) -> list:
    return [_complex_to_json(z) for z in np.asarray(v).reshape(-1)]


def _vector_from_json(obj: Any, where: str, length: int = 2) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != length:
        raise SchemaError(f"{where}: expected a list of {length} complex entries")
    return np.array(
        [_complex_from_json(z, f"{where}[{i}]") for i, z in enumerate(obj)],
        dtype=complex,
    )


# ---------------------------------------------------------------------------
# walk specs


_EXT_NAMES = {"periodic": Periodic, "constant_tails": ConstantTails, "window_only": WindowOnly}


def _extension_to_json(ext: Extension) -> dict:
    if isinstance(ext, Periodic):
        return {"kind": "periodic", "p": ext.p}
    if isinstance(ext, ConstantTails):
        return {"kind": "constant_tails"}
    return {"kind": "window_only"}


def _extension_from_json(obj: Any) -> Extension:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError('extension: expected {"kind": ...}')
    kind = obj["kind"]
    if kind == "periodic":
        p = obj.get("p")
        if not isinstance(p, int) or p < 1:
            raise SchemaError('extension: periodic needs an integer "p" >= 1')
        return Periodic(p)
    if kind in _EXT_NAMES:
        return _EXT_NAMES[kind]()
    raise SchemaError(f"extension: unknown kind {kind!r}")


def walk_to_json(w: WalkSpec) -> dict:
    doc: dict[str, Any] = {
        "form": f"C{w.class_k}" if w.is_typed else "general",
        "window": [w.window.lo, w.window.hi],
        "extension": _extension_to_json(w.extension),
    }
    if w.is_typed:
        doc["coins"] = [
            {
                "n": n,
                "a": amp_to_json(w.coins[n].a),
                "b": amp_to_json(w.coins[n].b),
                "c": amp_to_json(w.coins[n].c),
                "d": amp_to_json(w.coins[n].d),
            }
            for n in w.window.sites()
        ]
    else:
        doc["sites"] = [
            {
                "n": n,
                "xi_plus": _vector_to_json(w.bases[n].xi_plus),
                "xi_minus": _vector_to_json(w.bases[n].xi_minus),
                "zeta_minus": _vector_to_json(w.bases[n].zeta_minus),
                "zeta_plus": _vector_to_json(w.bases[n].zeta_plus),
            }
            for n in w.window.sites()
        ]
    return doc


def _window_from_json(obj: Any) -> Window:
    if (
        not isinstance(obj, list)
        or len(obj) != 2
        or not all(isinstance(x, int) for x in obj)
    ):
        raise SchemaError('"window" must be [lo, hi] integers')
    if obj[0] > obj[1]:
        raise SchemaError(f'"window" is empty: {obj}')
    return Window(obj[0], obj[1])


def walk_from_json(doc: Any, strict: bool = True) -> WalkSpec:
    if not isinstance(doc, dict):
        raise SchemaError("walk document must be an object")
    for key in ("form", "window", "extension"):
        if key not in doc:
            raise SchemaError(f'missing "{key}"')
    window = _window_from_json(doc["window"])
    ext = _extension_from_json(doc["extension"])
    form = doc["form"]
    if form == "general":
        entries = doc.get("sites")
        if not isinstance(entries, list):
            raise SchemaError('general form needs a "sites" list')
        bases = {}
        for item in entries:
            if not isinstance(item, dict) or not isinstance(item.get("n"), int):
                raise SchemaError('each site needs an integer "n"')
            n = item["n"]
            try:
                bases[n] = SiteBases(
                    **{
                        k: _vector_from_json(item.get(k), f"site {n}.{k}")
                        for k in ("xi_plus", "xi_minus", "zeta_minus", "zeta_plus")
                    }
                )
            except SchemaError:
                raise
        missing = [n for n in window.sites() if n not in bases]
        if missing:
            raise SchemaError(f"sites missing: {missing}")
        spec = WalkSpec.general(bases, window, ext)
        if strict:
            _strict_check(spec)
        return spec
    if isinstance(form, str) and form.upper() in ("C1", "C2", "C3", "C4"):
        k = int(form[1])
        entries = doc.get("coins")
        if not isinstance(entries, list):
            raise SchemaError('typed form needs a "coins" list')
        coins = {}
        for item in entries:
            if not isinstance(item, dict) or not isinstance(item.get("n"), int):
                raise SchemaError('each coin needs an integer "n"')
            n = item["n"]
            parts = {}
            for key in ("a", "b", "c", "d"):
                if key not in item:
                    raise SchemaError(f'coin at site {n}: missing "{key}"')
                parts[key] = amp_from_json(item[key], f"coin {n}.{key}")
            coins[n] = Coin2(**parts)
        missing = [n for n in window.sites() if n not in coins]
        if missing:
            raise SchemaError(f"coins missing for sites: {missing}")
        try:
            spec = WalkSpec.typed(k, coins, window, ext)
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
        if strict:
            _strict_check(spec)
        return spec
    raise SchemaError(f"unknown form {form!r}")


def _strict_check(spec: WalkSpec) -> None:
    if spec.is_typed and spec.class_k in (1, 3):
        for n in spec.window.sites():
            res = spec.coins[n].unitarity_residual()
            if res > ACCEPT_TOL:
                raise ValidationError(
                    f"coin at site {n} is not unitary (residual {res:.3e})"
                )
    elif not spec.is_typed:
        for n in spec.window.sites():
            res = spec.bases[n].onb_residual()
            if res > ACCEPT_TOL:
                raise ValidationError(
                    f"site {n} frames are not orthonormal (residual {res:.3e})"
                )
    else:
        from .model import validate

        report = validate(spec)
        if not report.ok:
            bad = max(report.sites, key=lambda s: s.worst)
            raise ValidationError(
                f"walk invalid near site {bad.site} (residual {bad.worst:.3e})"
            )


def parse_walk_file(text: str | bytes, strict: bool = True) -> WalkSpec:
    """Parse a walk document; see the module docstring for error classes."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return walk_from_json(doc, strict=strict)


def emit_walk_file(w: WalkSpec) -> str:
    return dumps(walk_to_json(w))


# ---------------------------------------------------------------------------
# unitary families


def family_to_json(fam: SiteUnitaryFamily) -> dict:
    return {
        "window": [fam.window.lo, fam.window.hi],
        "unitaries": [
            {
                "n": n,
                "rows": [
                    _vector_to_json(fam.unitaries[n][0]),
                    _vector_to_json(fam.unitaries[n][1]),
                ],
            }
            for n in fam.window.sites()
        ],
    }


def family_from_json(doc: Any) -> SiteUnitaryFamily:
    if not isinstance(doc, dict) or "window" not in doc or "unitaries" not in doc:
        raise SchemaError('unitary family needs "window" and "unitaries"')
    window = _window_from_json(doc["window"])
    table = {}
    for item in doc["unitaries"]:
        if not isinstance(item, dict) or not isinstance(item.get("n"), int):
            raise SchemaError('each unitary needs an integer "n"')
        rows = item.get("rows")
        if not isinstance(rows, list) or len(rows) != 2:
            raise SchemaError(f'unitary at {item["n"]}: "rows" must have 2 rows')
        table[item["n"]] = np.array(
            [
                _vector_from_json(rows[0], f'unitary {item["n"]} row 0'),
                _vector_from_json(rows[1], f'unitary {item["n"]} row 1'),
            ]
        )
    missing = [n for n in window.sites() if n not in table]
    if missing:
        raise SchemaError(f"unitaries missing for sites: {missing}")
    return SiteUnitaryFamily(window, table)


def parse_family_file(text: str | bytes) -> SiteUnitaryFamily:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return family_from_json(doc)


# ---------------------------------------------------------------------------
# certificates and factorizations


def certificate_to_json(cert: SzegedyCertificate) -> dict:
    return {
        "lambda": angle_to_json(cert.lam),
        "theta": [
            {"n": n, "angle": angle_to_json(cert.theta[n])}
            for n in sorted(cert.theta)
        ],
        "phi": [
            {"n": n, "v": _vector_to_json(cert.phi[n])} for n in sorted(cert.phi)
        ],
    }


def certificate_from_json(doc: Any) -> SzegedyCertificate:
    if not isinstance(doc, dict) or "lambda" not in doc:
        raise SchemaError('certificate needs "lambda", "theta", "phi"')
    lam = angle_from_json(doc["lambda"], "lambda")
    theta = {}
    for item in doc.get("theta", []):
        if not isinstance(item, dict) or not isinstance(item.get("n"), int):
            raise SchemaError('each theta entry needs an integer "n"')
        theta[item["n"]] = angle_from_json(item.get("angle"), f'theta {item["n"]}')
    phi = {}
    for item in doc.get("phi", []):
        if not isinstance(item, dict) or not isinstance(item.get("n"), int):
            raise SchemaError('each phi entry needs an integer "n"')
        phi[item["n"]] = _vector_from_json(item.get("v"), f'phi {item["n"]}')
    return SzegedyCertificate(lam=lam, theta=theta, phi=phi)


def parse_certificate_file(text: str | bytes) -> SzegedyCertificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return certificate_from_json(doc)


def factorization_to_json(fac: ShiftCoinFactorization) -> dict:
    return {
        "window": [fac.window.lo, fac.window.hi],
        "shift": [
            {
                "n": n,
                "left": _vector_to_json(pair.left),
                "right": _vector_to_json(pair.right),
                "phase": _complex_to_json(pair.phase),
            }
            for n, pair in sorted(fac.shift.pairs.items())
        ],
        "coins": [
            {
                "n": n,
                "rows": [
                    _vector_to_json(fac.coins[n][0]),
                    _vector_to_json(fac.coins[n][1]),
                ],
            }
            for n in fac.window.sites()
        ],
    }
