"""Deciding whether a walk is a Szegedy walk.

A walk is a *Szegedy walk* when it can be written as ``U = S C`` with
``S`` a self-adjoint shift that swaps the two channel vectors across
each edge (with a phase ``exp(i*theta_n)`` per edge) and ``C`` a direct
sum of site-local reflections ``2|phi_n><phi_n| - 1``, up to one global
phase ``exp(i*lam)``.  For a class-1 walk with coin entries
``a = s e^{i sigma}``, ``b = r e^{i nu}``, ``c = r e^{i mu}``,
``d = s e^{i tau}`` and determinant phase ``delta``, this holds exactly
when phases ``theta_n`` and ``lam`` exist with

    theta_n - theta_{n-1} - 2*lam = delta_n   (mod 2*pi)   for all n,
    theta_n - lam = mu_n                      (mod pi)     when r_n > 0.

Eliminating ``theta`` between consecutive *constrained* sites (those
with ``r_n > 0``) reduces the system to congruences
``2*(n_k - n_{k-1})*lam = c_k (mod pi)`` handled by
:func:`qwalk1d.angles.solve_family`; afterwards ``theta`` is recovered
by propagation from an anchor.  Walks in other classes or in general
form are first conjugated to class 1, which does not change the answer;
the certificate then refers to that class-1 conjugate.

:func:`phase_slope` is an independent second route: the accumulated
phase mismatch between consecutive constrained sites must grow linearly
in the gap, with one slope ``eta`` common to all pairs.  When both
routes succeed they are related by ``eta = -2*lam (mod pi)``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .angles import (
    ANGLE_TOL,
    PI,
    TWO_PI,
    ZERO,
    Angle,
    CongruenceConstraint,
    equal_mod,
    normalize,
    residual_mod,
    solve_family,
)
from .canonical import general_to_type
from .model import (
    MAG_ZERO_TOL,
    ConstantTails,
    InvalidSpec,
    Periodic,
    PolarCoin,
    SupportEscapedWindow,
    WalkSpec,
    WindowOnly,
    polar_form,
    validate,
)

__all__ = [
    "WrongClass",
    "NoConstrainedSites",
    "ConstraintSystem",
    "SzegedyCertificate",
    "CheckResult",
    "VerificationReport",
    "build_constraints",
    "solve",
    "phase_slope",
    "verify_certificate",
]


class WrongClass(ValueError):
    """An operation that needs a class-1 typed walk got something else."""


class NoConstrainedSites(ValueError):
    """The slope criterion needs at least one site with ``r_n > 0``."""


@dataclass(frozen=True)
class ConstraintSystem:
    """The reduced congruence system of a class-1 walk.

    ``span`` is the site range the analysis covers: the window itself
    for window-only walks, one extra clamped site per side for constant
    tails (the deeper tail repeats those constraints), and one period
    for periodic walks, whose pair list then also carries the bridge
    into the next period.  ``lambda_sites`` are the constrained sites in
    the span, ``anchor`` the first of them (None when there are none).
    """

    span: tuple[int, int]
    lambda_sites: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    constraints: tuple[CongruenceConstraint, ...]
    anchor: int | None
    mus: Mapping[int, Angle] = field(repr=False, default_factory=dict)
    deltas: Mapping[int, Angle] = field(repr=False, default_factory=dict)


def _require_class1(w: WalkSpec) -> None:
    if not (w.is_typed and w.class_k == 1):
        got = f"class {w.class_k}" if w.is_typed else "general form"
        raise WrongClass(f"expected a class-1 typed walk, got {got}")


def _analysis_span(w: WalkSpec) -> tuple[int, int]:
    win = w.window
    if isinstance(w.extension, Periodic):
        return win.lo, win.lo + w.extension.p - 1
    if isinstance(w.extension, ConstantTails):
        return win.lo - 1, win.hi + 1
    return win.lo, win.hi


def _polar_lookup(w: WalkSpec) -> Callable[[int], PolarCoin]:
    cache: dict[int, PolarCoin] = {}

    def pol(n: int) -> PolarCoin:
        m = w.resolve_site(n)
        if m not in cache:
            cache[m] = polar_form(w.coins[m])
        return cache[m]

    return pol


def _site_pairs(w: WalkSpec, lam_sites: list[int]) -> list[tuple[int, int]]:
    pairs = [(m, n) for m, n in zip(lam_sites, lam_sites[1:])]
    if isinstance(w.extension, Periodic) and lam_sites:
        # the constrained pattern repeats; one bridge into the next
        # period closes the system
        pairs.append((lam_sites[-1], lam_sites[0] + w.extension.p))
    return pairs


def build_constraints(w: WalkSpec, tol: float = ANGLE_TOL) -> ConstraintSystem:
    """Reduce the phase system of a class-1 walk to congruences in ``lam``.

    For each pair ``(m, n)`` of consecutive constrained sites the
    unknown edge phases cancel and leave
    ``2*(n-m)*lam = mu_n - mu_m - sum(delta_j, j=m+1..n)  (mod pi)``.
    """
    _require_class1(w)
    pol = _polar_lookup(w)
    lo, hi = _analysis_span(w)
    span_sites = range(lo, hi + 1)
    lam_sites = [n for n in span_sites if pol(n).r > MAG_ZERO_TOL]
    pairs = _site_pairs(w, lam_sites)
    constraints = []
    for m, n in pairs:
        c = pol(n).mu - pol(m).mu
        for j in range(m + 1, n + 1):
            c = c - pol(j).delta
        constraints.append(CongruenceConstraint(d=n - m, c=c))
    return ConstraintSystem(
        span=(lo, hi),
        lambda_sites=tuple(lam_sites),
        pairs=tuple(pairs),
        constraints=tuple(constraints),
        anchor=lam_sites[0] if lam_sites else None,
        mus={n: pol(n).mu for n in span_sites},
        deltas={n: pol(n).delta for n in span_sites},
    )


@dataclass(frozen=True, eq=False)
class SzegedyCertificate:
    """Witness that a class-1 walk is a Szegedy walk.

    ``lam`` is the global phase, ``theta`` the edge phases (keyed by the
    edge's left site, covering ``lo-1 .. hi``, stored mod ``2*pi``) and
    ``phi`` the unit reflection axes per window site, phase-fixed so the
    first nonzero component is real positive.
    """

    lam: Angle
    theta: Mapping[int, Angle]
    phi: Mapping[int, np.ndarray]

    def __post_init__(self) -> None:
        phi = {}
        for n, v in self.phi.items():
            arr = np.array(v, dtype=complex).reshape(2).copy()
            arr.flags.writeable = False
            phi[int(n)] = arr
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", {int(n): t for n, t in self.theta.items()})


def _canonical_c1(w: WalkSpec) -> WalkSpec:
    """The class-1 conjugate a verdict/certificate refers to."""
    if w.is_typed and w.class_k == 1:
        report = validate(w)
        if not report.ok:
            raise InvalidSpec(
                "walk failed validation: " + "; ".join(report.lines()[-2:])
            )
        return w
    return general_to_type(w, 1)[0]


def _reflection_block(
    coin, theta_prev: Angle, theta_here: Angle, lam: Angle
) -> np.ndarray:
    """Site block of ``exp(i*lam) * S * U`` for a class-1 walk."""
    g = cmath.exp(1j * lam.radians)
    down = cmath.exp(-1j * theta_here.radians)
    up = cmath.exp(1j * theta_prev.radians)
    a, b = coin.a.value, coin.b.value
    c, d = coin.c.value, coin.d.value
    return g * np.array([[down * c, down * d], [up * a, up * b]], dtype=complex)


def _plus_eigenvector(block: np.ndarray) -> np.ndarray:
    proj = 0.5 * (block + np.eye(2))
    j = int(np.argmax(np.abs(np.diag(proj))))
    v = proj[:, j]
    v = v / np.linalg.norm(v)
    for comp in v:
        if abs(comp) > MAG_ZERO_TOL:
            v = v * (comp.conjugate() / abs(comp))
            break
    return v


def solve(w: WalkSpec, tol: float = ANGLE_TOL) -> SzegedyCertificate | None:
    """Decide the Szegedy property; return a certificate or ``None``.

    Non-class-1 walks are conjugated to class 1 first.  The edge phases
    are anchored at the first constrained site by
    ``theta = mu + lam`` (or at the window's left edge by 0 when no
    site is constrained) and propagated with
    ``theta_n = theta_{n-1} + 2*lam + delta_n``.  Each congruence
    solution is re-checked site by site before being certified.
    """
    c1 = _canonical_c1(w)
    system = build_constraints(c1, tol)
    sols = solve_family(system.constraints, tol)
    if sols.is_empty:
        return None
    candidates = (ZERO,) if sols.unconstrained else sols.lambdas
    # pick the representative whose induced slope -2*lam (mod pi) is
    # smallest so certificates line up with phase_slope; ties (which
    # cover every single-gap system) keep the smallest lam
    candidates = sorted(
        candidates, key=lambda lam: (normalize(lam * -2, PI).radians, lam.radians)
    )
    pol = _polar_lookup(c1)
    win = c1.window

    for lam in candidates:
        theta: dict[int, Angle] = {}
        if system.anchor is not None:
            n0 = system.anchor
            theta[n0] = pol(n0).mu + lam
        else:
            n0 = win.lo
            theta[n0] = ZERO
        for n in range(n0 + 1, win.hi + 1):
            theta[n] = theta[n - 1] + lam * 2 + pol(n).delta
        for n in range(n0 - 1, win.lo - 2, -1):
            theta[n] = theta[n + 1] - lam * 2 - pol(n + 1).delta

        ok = True
        for n in range(win.lo - 1, win.hi + 1):
            try:
                p = pol(n)
            except SupportEscapedWindow:
                continue  # window-only: nothing known left of the window
            if p.r > MAG_ZERO_TOL and not equal_mod(theta[n] - lam, p.mu, PI, tol):
                ok = False
                break
        if not ok:
            continue

        theta = {n: normalize(t, TWO_PI) for n, t in theta.items()}
        phi = {
            n: _plus_eigenvector(
                _reflection_block(c1.coins[n], theta[n - 1], theta[n], lam)
            )
            for n in win.sites()
        }
        return SzegedyCertificate(lam=lam, theta=theta, phi=phi)
    return None


def phase_slope(w: WalkSpec, tol: float = ANGLE_TOL) -> Angle | None:
    """Independent Szegedy criterion via a common phase slope.

    Between consecutive constrained sites ``m < n`` the quantity
    ``mu_m + nu_n + sum(delta_j, j=m+1..n-1)`` must equal ``eta*(n-m)``
    modulo pi for one slope ``eta`` shared by all pairs.  Returns that
    slope (in ``[0, pi)``, the smallest when several work) or ``None``.
    Raises :class:`NoConstrainedSites` when no site has ``r_n > 0``;
    with a single constrained site the condition is vacuous and the
    slope defaults to 0.  Against :func:`solve` the routes must agree,
    with ``eta = -2*lam (mod pi)``.
    """
    c1 = _canonical_c1(w)
    pol = _polar_lookup(c1)
    lo, hi = _analysis_span(c1)
    lam_sites = [n for n in range(lo, hi + 1) if pol(n).r > MAG_ZERO_TOL]
    if not lam_sites:
        raise NoConstrainedSites("no site has an off-diagonal coin component")
    pairs = _site_pairs(c1, lam_sites)
    if not pairs:
        return ZERO

    def rhs(m: int, n: int) -> Angle:
        acc = pol(m).mu + pol(n).nu
        for j in range(m + 1, n):
            acc = acc + pol(j).delta
        return normalize(acc, PI)

    m0, n0 = pairs[0]
    d0 = n0 - m0
    base = rhs(m0, n0)
    for k in range(d0):
        eta = (base + PI * k) / d0
        if all(equal_mod(eta * (n - m), rhs(m, n), PI, tol) for m, n in pairs[1:]):
            return normalize(eta, PI)
    return None


# ---------------------------------------------------------------------------
# certificate verification


@dataclass
class CheckResult:
    name: str
    residual: float
    passed: bool
    details: list[str] = field(default_factory=list)


@dataclass
class VerificationReport:
    """Each certificate check with its worst residual."""

    checks: list[CheckResult]
    tol: float

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL"
            out.append(f"{c.name:<18} {mark}  residual {c.residual:.3e}")
            out.extend(f"  - {d}" for d in c.details)
        return out


def verify_certificate(
    w: WalkSpec, cert: SzegedyCertificate, tol: float = 1e-12
) -> VerificationReport:
    """Check a certificate against the walk, numerically and locally.

    Five checks, each reported with its worst residual:

    1. ``congruences`` -- the two phase congruences at every site where
       the needed data exists;
    2. ``shift-involution`` -- the assembled shift is self-adjoint and
       squares to the identity;
    3. ``shift-ranges`` -- the shift maps the range of each forward
       block onto the range of the matching backward block;
    4. ``blocks`` -- every site block of ``exp(i*lam) S U`` is
       traceless, self-adjoint and unitary;
    5. ``reflection`` -- the block equals ``2|phi><phi| - 1`` with the
       stored, phase-fixed unit ``phi``.

    Non-class-1 walks are conjugated to class 1 exactly as in
    :func:`solve`, so certificates produced there verify here.
    """
    c1 = _canonical_c1(w)
    pol = _polar_lookup(c1)
    win = c1.window
    lam, theta = cert.lam, cert.theta
    checks: list[CheckResult] = []

    missing = [n for n in range(win.lo - 1, win.hi + 1) if n not in theta]

    # -- check 1: phase congruences ------------------------------------
    worst = 0.0
    details: list[str] = []
    if missing:
        details.append(f"edge phases missing for sites {missing}")
    for n in win.sites():
        if n in theta and n - 1 in theta:
            res = residual_mod(theta[n] - theta[n - 1] - lam * 2, pol(n).delta, TWO_PI)
            worst = max(worst, res)
    for n in range(win.lo - 1, win.hi + 1):
        if n not in theta:
            continue
        try:
            p = pol(n)
        except SupportEscapedWindow:
            continue
        if p.r > MAG_ZERO_TOL:
            worst = max(worst, residual_mod(theta[n] - lam, p.mu, PI))
    checks.append(
        CheckResult("congruences", worst, not missing and worst <= tol, details)
    )

    # -- check 2: the shift is a self-adjoint involution ----------------
    edges = [n for n in range(win.lo - 1, win.hi + 1) if n in theta]
    phases = {n: cmath.exp(1j * theta[n].radians) for n in edges}
    E = len(edges)
    S = np.zeros((2 * E, 2 * E), dtype=complex)
    for i, n in enumerate(edges):
        # per-edge basis (e1 at n, e2 at n+1)
        S[2 * i + 1, 2 * i] = phases[n]
        S[2 * i, 2 * i + 1] = np.conj(phases[n])
    res_sa = float(np.abs(S - S.conj().T).max())
    res_inv = float(np.abs(S @ S - np.eye(2 * E)).max())
    worst = max(res_sa, res_inv)
    checks.append(CheckResult("shift-involution", worst, worst <= tol))

    # -- check 3: ranges map onto ranges across each edge ---------------
    worst = 0.0
    for n in edges:
        try:
            cin = c1.coin_at(n + 1)  # U_{n, n+1}: block into site n
            cout = c1.coin_at(n)  # U_{n+1, n}: block into site n+1
        except SupportEscapedWindow:
            continue
        fwd = np.array([[cin.a.value, cin.b.value], [0, 0]], dtype=complex)
        bwd = np.array([[0, 0], [cout.c.value, cout.d.value]], dtype=complex)
        p_fwd = fwd @ fwd.conj().T
        p_bwd = bwd @ bwd.conj().T
        hop = phases[n] * np.outer([0, 1], [1, 0])  # e1 at n -> e2 at n+1
        leak = (np.eye(2) - p_bwd) @ hop @ p_fwd
        onto = np.linalg.norm(p_bwd @ hop @ p_fwd, 2)
        worst = max(worst, float(np.abs(leak).max()), abs(onto - 1.0))
    checks.append(CheckResult("shift-ranges", worst, worst <= tol))

    # -- checks 4 and 5: reflection blocks ------------------------------
    worst_block = 0.0
    worst_refl = 0.0
    refl_details: list[str] = []
    eye = np.eye(2)
    for n in win.sites():
        if n not in theta or n - 1 not in theta:
            continue
        block = _reflection_block(c1.coins[n], theta[n - 1], theta[n], lam)
        worst_block = max(
            worst_block,
            abs(complex(np.trace(block))),
            float(np.abs(block - block.conj().T).max()),
            float(np.abs(block.conj().T @ block - eye).max()),
        )
        v = cert.phi.get(n)
        if v is None:
            refl_details.append(f"axis missing at site {n}")
            worst_refl = np.inf
            continue
        worst_refl = max(
            worst_refl,
            float(np.abs(block - (2.0 * np.outer(v, v.conj()) - eye)).max()),
            abs(float(np.linalg.norm(v)) - 1.0),
        )
        for comp in v:
            if abs(comp) > MAG_ZERO_TOL:
                worst_refl = max(worst_refl, abs(comp - abs(comp)))
                break
    checks.append(CheckResult("blocks", worst_block, worst_block <= tol))
    checks.append(
        CheckResult(
            "reflection", worst_refl, bool(worst_refl <= tol), refl_details
        )
    )

    return VerificationReport(checks=checks, tol=tol)
