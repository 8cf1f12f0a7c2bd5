"""Command-line front end.

Subcommands wrap the library one-to-one::

    qwalk1d validate WALK.json             diagnostics, exit 0/1
    qwalk1d canonicalize WALK.json --to c1 typed spec (+ W family with --emit-w)
    qwalk1d factor WALK.json               shift/coin factorization as JSON
    qwalk1d szegedy-check WALK.json        verdict + certificate, exit 0/1
    qwalk1d simulate WALK.json --steps T   CSV of site probabilities
    qwalk1d equiv-verify WALK.json W.json  max distribution deviation, exit 0/1
    qwalk1d model NAME [params]            write a model walk spec

Exit codes: 0 success (walk valid / is a Szegedy walk / deviation below
tolerance), 1 negative verdict, 2 invalid input of any kind.  All output
is deterministic for fixed inputs: JSON is emitted with stable key order
and CSV floats with ``%.12e``.

Angles on the command line accept ``pi`` forms (``pi/2``, ``-3pi/4``,
``2/3pi``) which stay exact, or plain radians (``0.3``).  The
``--initial`` state is given as ``site:re1,im1,re2,im2`` and is
normalized on load.  ``QWALK_TOL`` in the environment overrides the
default tolerance; ``--tol`` overrides both.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import canonical, models, szegedy
from .angles import PI, ZERO, Angle
from .evolve import State, step, verify_equivalence_distributions
from .model import ACCEPT_TOL, Amp, Periodic, WalkSpec, WindowOnly, validate
from .serialize import (
    certificate_to_json,
    dumps,
    emit_walk_file,
    factorization_to_json,
    family_to_json,
    parse_family_file,
    parse_walk_file,
)

__all__ = ["RunConfig", "dispatch", "main", "parse_angle"]


_PI_FORMS = (
    re.compile(r"^([+-]?)(\d+)?pi(?:/(\d+))?$"),  # pi, 3pi/4, -pi/6
    re.compile(r"^([+-]?)(\d+)/(\d+)pi$"),  # 2/3pi
)


def parse_angle(token: str) -> Angle:
    """Parse ``pi/2``-style exact angles or plain float radians."""
    t = token.strip().lower().replace("π", "pi").replace(" ", "")
    for form in _PI_FORMS:
        m = form.match(t)
        if m:
            sign = -1 if m.group(1) == "-" else 1
            num = int(m.group(2)) if m.group(2) else 1
            den = int(m.group(3)) if m.group(3) else 1
            return Angle.from_pi(sign * num, den)
    try:
        return Angle.from_radians(float(t))
    except ValueError:
        raise ValueError(f"cannot parse angle {token!r}") from None


def _parse_window(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError(f"window must be LO:HI, got {text!r}")
    return int(lo), int(hi)


def _parse_initial(text: str) -> tuple[int, np.ndarray]:
    head, sep, tail = text.partition(":")
    if not sep:
        raise ValueError(f"initial state must be site:re1,im1,re2,im2, got {text!r}")
    parts = tail.split(",")
    if len(parts) != 4:
        raise ValueError(f"initial state needs 4 amplitude components, got {text!r}")
    re1, im1, re2, im2 = (float(x) for x in parts)
    return int(head), np.array([complex(re1, im1), complex(re2, im2)])


def _resolve_tol(flag: float | None) -> float:
    if flag is not None:
        tol = float(flag)
    elif "QWALK_TOL" in os.environ:
        tol = float(os.environ["QWALK_TOL"])
    else:
        tol = ACCEPT_TOL
    if not 0.0 < tol <= 1e-3:
        raise ValueError(f"tolerance must be in (0, 1e-3], got {tol:g}")
    return tol


@dataclass
class RunConfig:
    """Everything a dispatch run needs, decoupled from argparse."""

    command: str
    inputs: tuple[str, ...] = ()
    output: str | None = None
    output_w: str | None = None
    steps: int = 50
    initial: tuple[int, np.ndarray] | None = None
    tol: float = ACCEPT_TOL
    seed: int = 0
    to_class: int | None = None
    amplitudes: bool = False
    model_name: str | None = None
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if not 0.0 < self.tol <= 1e-3:
            raise ValueError(f"tolerance must be in (0, 1e-3], got {self.tol:g}")


def _read_walk(path: str, strict: bool = True) -> WalkSpec:
    return parse_walk_file(Path(path).read_text(), strict=strict)


def _write_or_print(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_validate(cfg: RunConfig) -> int:
    spec = _read_walk(cfg.inputs[0], strict=False)
    report = validate(spec, tol=cfg.tol)
    for line in report.lines():
        print(line)
    return 0 if report.ok else 1


def _cmd_canonicalize(cfg: RunConfig) -> int:
    spec = _read_walk(cfg.inputs[0])
    typed, fam = canonical.general_to_type(spec, cfg.to_class or 1)
    _write_or_print(emit_walk_file(typed), cfg.output)
    if cfg.output_w is not None:
        Path(cfg.output_w).write_text(dumps(family_to_json(fam)))
    return 0


def _cmd_factor(cfg: RunConfig) -> int:
    spec = _read_walk(cfg.inputs[0])
    fac = canonical.factor_shift_coin(spec)
    _write_or_print(dumps(factorization_to_json(fac)), cfg.output)
    return 0


def _as_class1(spec: WalkSpec) -> WalkSpec:
    if spec.is_typed and spec.class_k == 1:
        return spec
    return canonical.general_to_type(spec, 1)[0]


def _cmd_szegedy_check(cfg: RunConfig) -> int:
    spec = _as_class1(_read_walk(cfg.inputs[0]))
    cert = szegedy.solve(spec, tol=cfg.tol)
    if cert is None:
        print("szegedy: no")
        return 1
    print("szegedy: yes")
    print(f"λ = {cert.lam} (mod π)")
    try:
        eta = szegedy.phase_slope(spec, tol=cfg.tol)
    except szegedy.NoConstrainedSites:
        print("η unconstrained (every coin is off-diagonal)")
    else:
        if eta is not None:
            print(f"η = {eta} (mod π)")
    _write_or_print(dumps(certificate_to_json(cert)), cfg.output)
    return 0


def _csv_rows(spec: WalkSpec, psi0: State, steps: int, amplitudes: bool) -> list[str]:
    rows = []
    if amplitudes:
        rows.append("t,site,re1,im1,re2,im2")
    else:
        rows.append("t,site,prob")
    psi = psi0
    for t in range(steps + 1):
        if t > 0:
            psi = step(spec, psi)
        if amplitudes:
            for n, v in psi.items():
                rows.append(
                    f"{t},{n},{v[0].real:.12e},{v[0].imag:.12e},"
                    f"{v[1].real:.12e},{v[1].imag:.12e}"
                )
        else:
            for n, p in sorted(psi.probabilities().items()):
                rows.append(f"{t},{n},{p:.12e}")
    return rows


def _cmd_simulate(cfg: RunConfig) -> int:
    spec = _read_walk(cfg.inputs[0])
    site, v = cfg.initial if cfg.initial is not None else (0, np.array([1.0, 0.0]))
    psi0 = State({site: v})
    rows = _csv_rows(spec, psi0, cfg.steps, cfg.amplitudes)
    _write_or_print("\n".join(rows) + "\n", cfg.output)
    return 0


def _cmd_equiv_verify(cfg: RunConfig) -> int:
    spec = _read_walk(cfg.inputs[0])
    fam = parse_family_file(Path(cfg.inputs[1]).read_text())
    site, v = cfg.initial if cfg.initial is not None else (0, np.array([1.0, 0.0]))
    psi0 = State({site: v})
    dev = verify_equivalence_distributions(spec, fam, psi0, cfg.steps)
    print(f"max deviation = {dev:.3e} over {cfg.steps} steps")
    return 0 if dev < cfg.tol else 1


def _omega_map(cfg: RunConfig, window: tuple[int, int]) -> dict[int, Angle]:
    lo, hi = window
    slope = cfg.params.get("omega_slope")
    if slope is not None:
        return {n: slope * n for n in range(lo, hi + 1)}
    tokens = cfg.params.get("omega")
    if tokens is None:
        raise ValueError("this model needs --omega or --omega-slope")
    angles = [parse_angle(t) for t in tokens.split(",")]
    if len(angles) == 1:
        return {n: angles[0] for n in range(lo, hi + 1)}
    if len(angles) != hi - lo + 1:
        raise ValueError(
            f"--omega needs 1 or {hi - lo + 1} angles for window {lo}:{hi}, "
            f"got {len(angles)}"
        )
    return {n: a for n, a in zip(range(lo, hi + 1), angles)}


def _two_coin_half(cfg: RunConfig, side: str) -> tuple[Amp, Angle, Angle, Amp, float]:
    r = float(cfg.params.get(f"r_{side}", 1.0 / np.sqrt(2.0)))
    if not 0.0 < r <= 1.0:
        raise ValueError(f"--r-{side} must be in (0, 1], got {r:g}")
    sigma = cfg.params.get(f"sigma_{side}", ZERO)
    nu = cfg.params.get(f"nu_{side}", ZERO)
    mu = cfg.params.get(f"mu_{side}", ZERO)
    s = float(np.sqrt(max(0.0, 1.0 - r * r)))
    # arg a + arg d = mu + nu + pi keeps the coin unitary by construction
    a = Amp(s, sigma)
    d = Amp(s, mu + nu + PI - sigma)
    return a, nu, mu, d, r


def _cmd_model(cfg: RunConfig) -> int:
    name = cfg.model_name
    window = cfg.params.get("window")
    if name == "hadamard":
        spec = models.hadamard(window or (0, 0))
    elif name in ("kitagawa_a", "kitagawa_b"):
        win = window or (-4, 4)
        omega = _omega_map(cfg, win)
        builder = models.kitagawa_a if name == "kitagawa_a" else models.kitagawa_b
        spec = builder(omega, win)
    elif name == "two_coin":
        ap, nup, mup, dp, rp = _two_coin_half(cfg, "plus")
        am, num_, mum, dm, rm = _two_coin_half(cfg, "minus")
        spec = models.two_coin(
            ap, nup, mup, dp, rp, am, num_, mum, dm, rm, window or (-4, 4)
        )
    elif name == "shikano_katsura":
        alpha = cfg.params.get("alpha")
        if alpha is None:
            raise ValueError("shikano_katsura needs --alpha")
        spec = models.shikano_katsura(alpha, window or (-4, 4))
    elif name == "random":
        spec = models.random_walk(
            cfg.seed, window or (-4, 4), k=cfg.to_class or 1, extension=Periodic(1)
            if cfg.params.get("periodic_ti")
            else None,
        )
    elif name == "random_general":
        spec = models.random_general_walk(cfg.seed, window or (-4, 4))
    else:
        raise ValueError(f"unknown model {name!r}")
    _write_or_print(emit_walk_file(spec), cfg.output)
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "canonicalize": _cmd_canonicalize,
    "factor": _cmd_factor,
    "szegedy-check": _cmd_szegedy_check,
    "simulate": _cmd_simulate,
    "equiv-verify": _cmd_equiv_verify,
    "model": _cmd_model,
}


def dispatch(cfg: RunConfig) -> int:
    """Run one command; returns the process exit code."""
    return _COMMANDS[cfg.command](cfg)


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk1d",
        description="one-dimensional quantum walks: canonical forms, "
        "Szegedy decision, exact simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_tol(p):
        p.add_argument("--tol", type=float, default=None, help="tolerance override")

    p = sub.add_parser("validate", help="check a walk spec, print diagnostics")
    p.add_argument("walk")
    add_tol(p)

    p = sub.add_parser("canonicalize", help="conjugate into a typed class")
    p.add_argument("walk")
    p.add_argument("--to", required=True, choices=["c1", "c2", "c3", "c4"])
    p.add_argument("--emit", help="write the typed spec here instead of stdout")
    p.add_argument("--emit-w", help="also write the conjugating unitary family")
    add_tol(p)

    p = sub.add_parser("factor", help="shift/coin factorization of a walk")
    p.add_argument("walk")
    p.add_argument("--emit")
    add_tol(p)

    p = sub.add_parser("szegedy-check", help="decide the Szegedy property")
    p.add_argument("walk")
    p.add_argument("--emit", help="write the certificate here instead of stdout")
    add_tol(p)

    p = sub.add_parser("simulate", help="evolve an initial state, emit CSV")
    p.add_argument("walk")
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--initial", default="0:1,0,0,0", help="site:re1,im1,re2,im2")
    p.add_argument("--amplitudes", action="store_true", help="emit raw amplitudes")
    p.add_argument("--emit")

    p = sub.add_parser("equiv-verify", help="compare a walk with its conjugate")
    p.add_argument("walk")
    p.add_argument("family", help="site-unitary family JSON")
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--initial", default="0:1,0,0,0")
    add_tol(p)

    p = sub.add_parser("model", help="write a model walk spec")
    p.add_argument(
        "name",
        choices=[
            "hadamard",
            "kitagawa_a",
            "kitagawa_b",
            "two_coin",
            "shikano_katsura",
            "random",
            "random_general",
        ],
    )
    p.add_argument("--window", help="LO:HI")
    p.add_argument("--omega", help="angle, or comma list matching the window")
    p.add_argument("--omega-slope", help="angle; omega_n = n * slope")
    p.add_argument("--alpha", help="rotation rate, e.g. 5/12")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--class", dest="class_k", type=int, choices=[1, 2, 3, 4], default=1)
    p.add_argument("--periodic-ti", action="store_true",
                   help="random model: repeat one coin everywhere")
    for side in ("plus", "minus"):
        p.add_argument(f"--r-{side}", type=float)
        for ang in ("sigma", "nu", "mu"):
            p.add_argument(f"--{ang}-{side}")
    p.add_argument("--emit", help="write the spec here instead of stdout")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        inputs=tuple(
            getattr(args, name) for name in ("walk", "family") if hasattr(args, name)
        ),
        output=getattr(args, "emit", None),
        output_w=getattr(args, "emit_w", None),
        steps=getattr(args, "steps", 50),
        tol=_resolve_tol(getattr(args, "tol", None)),
        seed=getattr(args, "seed", 0),
        amplitudes=getattr(args, "amplitudes", False),
        model_name=getattr(args, "name", None),
    )
    if getattr(args, "initial", None) is not None:
        cfg.initial = _parse_initial(args.initial)
    if getattr(args, "to", None) is not None:
        cfg.to_class = int(args.to[1])
    if getattr(args, "class_k", None) is not None:
        cfg.to_class = cfg.to_class or args.class_k
    if args.command == "model":
        if args.window is not None:
            cfg.params["window"] = _parse_window(args.window)
        if args.omega is not None:
            cfg.params["omega"] = args.omega
        if args.omega_slope is not None:
            cfg.params["omega_slope"] = parse_angle(args.omega_slope)
        if args.alpha is not None:
            try:
                cfg.params["alpha"] = Fraction(args.alpha)
            except ValueError:
                cfg.params["alpha"] = float(args.alpha)
        if args.periodic_ti:
            cfg.params["periodic_ti"] = True
        for side in ("plus", "minus"):
            r = getattr(args, f"r_{side}")
            if r is not None:
                cfg.params[f"r_{side}"] = r
            for ang in ("sigma", "nu", "mu"):
                tok = getattr(args, f"{ang}_{side}")
                if tok is not None:
                    cfg.params[f"{ang}_{side}"] = parse_angle(tok)
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        return dispatch(cfg)
    except (ValueError, LookupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
