"""Unitary equivalences between walk forms.

Every nearest-neighbour walk can be rewritten, by conjugating with a
family of site-local 2x2 unitaries ``W_n``, into any of the four typed
classes.  The conversion never touches the dynamics: the conjugated
blocks are ``W_{n-1} U_{n-1,n} W_n*`` and ``W_{n+1} U_{n+1,n} W_n*``,
so site occupation probabilities of ``W psi0`` under the new walk match
those of ``psi0`` under the old one.

The ``W_n`` used by :func:`general_to_type` are read off the stored
site frames:

* class 1: ``W_n`` sends ``xi_plus -> e1`` and ``xi_minus -> e2``;
* class 2: ``W_n`` sends ``zeta_minus -> e1`` and ``zeta_plus -> e2``;
* class 3/4: the same with ``e1`` and ``e2`` swapped.

Independently of the class conversions, every walk splits as
``U = S T`` with ``T`` a direct sum of site-local coin unitaries and
``S`` the self-adjoint involution that swaps, per edge, the receiving
vector at one endpoint with the receiving vector at the other
(:func:`factor_shift_coin`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .model import (
    ACCEPT_TOL,
    Coin2,
    ConstantTails,
    Extension,
    InvalidSpec,
    Periodic,
    SiteBases,
    SupportEscapedWindow,
    UNITARY_TOL,
    WalkSpec,
    Window,
    WindowOnly,
    validate,
)

__all__ = [
    "WindowMismatch",
    "PeriodMismatch",
    "SiteUnitaryFamily",
    "ShiftPair",
    "ShiftOp",
    "ShiftCoinFactorization",
    "general_to_type",
    "typed_to_general",
    "apply_equivalence",
    "factor_shift_coin",
]

_E1 = np.array([1.0, 0.0], dtype=complex)
_E2 = np.array([0.0, 1.0], dtype=complex)


class WindowMismatch(ValueError):
    """Two objects that must share a window do not."""


class PeriodMismatch(ValueError):
    """A unitary family breaks the periodicity of the walk it acts on."""


@dataclass(frozen=True, eq=False)
class SiteUnitaryFamily:
    """A 2x2 unitary per window site, ``n -> W_n``."""

    window: Window
    unitaries: Mapping[int, np.ndarray]

    def __post_init__(self) -> None:
        table = {}
        for n, u in self.unitaries.items():
            arr = np.array(u, dtype=complex).reshape(2, 2).copy()
            arr.flags.writeable = False
            table[int(n)] = arr
        missing = [n for n in self.window.sites() if n not in table]
        if missing:
            raise ValueError(f"sites missing from unitary family: {missing}")
        object.__setattr__(self, "unitaries", table)

    @classmethod
    def identity(cls, window: Window) -> "SiteUnitaryFamily":
        eye = np.eye(2, dtype=complex)
        return cls(window, {n: eye for n in window.sites()})

    @classmethod
    def constant(cls, window: Window, u: np.ndarray) -> "SiteUnitaryFamily":
        return cls(window, {n: u for n in window.sites()})

    def at(self, n: int, extension: Extension) -> np.ndarray:
        """Look up ``W_n``, extending past the window like the walk does."""
        w = self.window
        if n in w:
            return self.unitaries[n]
        if isinstance(extension, Periodic):
            return self.unitaries[w.lo + (n - w.lo) % w.length]
        if isinstance(extension, ConstantTails):
            return self.unitaries[w.lo if n < w.lo else w.hi]
        raise SupportEscapedWindow(f"site {n} outside window [{w.lo}, {w.hi}]")

    def max_unitarity_residual(self) -> float:
        eye = np.eye(2)
        return max(
            float(np.abs(u.conj().T @ u - eye).max()) for u in self.unitaries.values()
        )

    def period_residual(self, p: int) -> float:
        worst = 0.0
        for n in range(self.window.lo, self.window.hi + 1 - p):
            worst = max(
                worst, float(np.abs(self.unitaries[n] - self.unitaries[n + p]).max())
            )
        return worst


def _require_valid(w: WalkSpec) -> None:
    report = validate(w)
    if not report.ok:
        raise InvalidSpec(
            "walk failed validation: " + "; ".join(report.lines()[-2:])
        )


def _as_general(w: WalkSpec) -> WalkSpec:
    return w if not w.is_typed else typed_to_general(w)


def typed_to_general(w: WalkSpec) -> WalkSpec:
    """Re-express a typed walk in general form (same walk, no conjugation).

    Classes 2 and 4 store, at site ``n``, receiving vectors that are
    coin columns of the *neighbouring* sites, so the conversion looks
    one site past each window edge; under ``WindowOnly`` that lookup is
    clamped to the edge coin.  With a periodic extension the round trip
    through :func:`general_to_type` reproduces the input exactly.
    """
    if not w.is_typed:
        return w

    def coin_near(n: int) -> Coin2:
        try:
            return w.coin_at(n)
        except SupportEscapedWindow:
            return w.coin_at(min(max(n, w.window.lo), w.window.hi))

    bases: dict[int, SiteBases] = {}
    k = w.class_k
    for n in w.window.sites():
        coin = w.coins[n]
        a, b = coin.a.value, coin.b.value
        c, d = coin.c.value, coin.d.value
        if k == 1:
            bases[n] = SiteBases(
                xi_plus=_E1,
                xi_minus=_E2,
                zeta_minus=np.conj([a, b]),
                zeta_plus=np.conj([c, d]),
            )
        elif k == 3:
            bases[n] = SiteBases(
                xi_plus=_E2,
                xi_minus=_E1,
                zeta_minus=np.conj([c, d]),
                zeta_plus=np.conj([a, b]),
            )
        elif k == 2:
            right, left = coin_near(n + 1), coin_near(n - 1)
            bases[n] = SiteBases(
                xi_plus=[right.a.value, right.c.value],
                xi_minus=[left.b.value, left.d.value],
                zeta_minus=_E1,
                zeta_plus=_E2,
            )
        else:  # class 4
            right, left = coin_near(n + 1), coin_near(n - 1)
            bases[n] = SiteBases(
                xi_plus=[right.b.value, right.d.value],
                xi_minus=[left.a.value, left.c.value],
                zeta_minus=_E2,
                zeta_plus=_E1,
            )
    return WalkSpec.general(bases, w.window, w.extension)


def general_to_type(w: WalkSpec, k: int) -> tuple[WalkSpec, SiteUnitaryFamily]:
    """Conjugate a walk into typed class ``k``.

    Returns the typed spec together with the site unitaries ``W_n``
    realizing it, so that the conjugated blocks equal the typed blocks
    exactly (up to rounding).  Typed inputs are first re-expressed in
    general form, which leaves the walk itself untouched.
    """
    if k not in (1, 2, 3, 4):
        raise ValueError(f"typed class must be 1..4, got {k}")
    _require_valid(w)
    g = _as_general(w)
    win = g.window

    def bases_near(n: int) -> SiteBases:
        try:
            return g.bases_at(n)
        except SupportEscapedWindow:
            return g.bases_at(min(max(n, win.lo), win.hi))

    unitaries: dict[int, np.ndarray] = {}
    for n in win.sites():
        sb = g.bases[n]
        if k == 1:
            wn = np.outer(_E1, sb.xi_plus.conj()) + np.outer(_E2, sb.xi_minus.conj())
        elif k == 3:
            wn = np.outer(_E2, sb.xi_plus.conj()) + np.outer(_E1, sb.xi_minus.conj())
        elif k == 2:
            wn = np.outer(_E1, sb.zeta_minus.conj()) + np.outer(_E2, sb.zeta_plus.conj())
        else:
            wn = np.outer(_E2, sb.zeta_minus.conj()) + np.outer(_E1, sb.zeta_plus.conj())
        unitaries[n] = wn
    fam = SiteUnitaryFamily(win, unitaries)

    def w_near(n: int) -> np.ndarray:
        try:
            return fam.at(n, g.extension)
        except SupportEscapedWindow:
            return fam.unitaries[min(max(n, win.lo), win.hi)]

    coins: dict[int, Coin2] = {}
    for n in win.sites():
        sb = g.bases[n]
        if k == 1:
            row_ab = (fam.unitaries[n] @ sb.zeta_minus).conj()
            row_cd = (fam.unitaries[n] @ sb.zeta_plus).conj()
            m = np.array([row_ab, row_cd])
        elif k == 3:
            row_cd = (fam.unitaries[n] @ sb.zeta_minus).conj()
            row_ab = (fam.unitaries[n] @ sb.zeta_plus).conj()
            m = np.array([row_ab, row_cd])
        elif k == 2:
            col_ac = w_near(n - 1) @ bases_near(n - 1).xi_plus
            col_bd = w_near(n + 1) @ bases_near(n + 1).xi_minus
            m = np.column_stack([col_ac, col_bd])
        else:
            col_bd = w_near(n - 1) @ bases_near(n - 1).xi_plus
            col_ac = w_near(n + 1) @ bases_near(n + 1).xi_minus
            m = np.column_stack([col_ac, col_bd])
        coins[n] = Coin2.from_matrix(m)
    typed = WalkSpec.typed(k, coins, win, g.extension)
    return typed, fam


def apply_equivalence(w: WalkSpec, fam: SiteUnitaryFamily) -> WalkSpec:
    """Conjugate ``w`` by a family of site unitaries.

    The result is a general-form walk on the same window with the same
    extension.  The family must live on the walk's window, be unitary
    at validation tolerance, and -- for a periodic walk -- repeat with
    the walk's period, since otherwise the conjugated description would
    not extend consistently.
    """
    if fam.window != w.window:
        raise WindowMismatch(
            f"walk window [{w.window.lo}, {w.window.hi}] vs family window "
            f"[{fam.window.lo}, {fam.window.hi}]"
        )
    res = fam.max_unitarity_residual()
    if res > ACCEPT_TOL:
        raise InvalidSpec(f"unitary family is not unitary (residual {res:.3e})")
    if isinstance(w.extension, Periodic):
        p = w.extension.p
        if p < w.window.length and fam.period_residual(p) > ACCEPT_TOL:
            raise PeriodMismatch(
                f"family breaks the walk's period {p} "
                f"(deviation {fam.period_residual(p):.3e})"
            )
    g = _as_general(w)
    bases: dict[int, SiteBases] = {}
    for n in g.window.sites():
        sb = g.bases[n]
        wn = fam.unitaries[n]
        bases[n] = SiteBases(
            xi_plus=wn @ sb.xi_plus,
            xi_minus=wn @ sb.xi_minus,
            zeta_minus=wn @ sb.zeta_minus,
            zeta_plus=wn @ sb.zeta_plus,
        )
    return WalkSpec.general(bases, g.window, g.extension)


# ---------------------------------------------------------------------------
# shift-coin factorization


@dataclass(frozen=True, eq=False)
class ShiftPair:
    """One edge of the shift: ``S (left at n) = phase * (right at n+1)``.

    The reverse action carries the conjugate phase, which makes the
    assembled operator self-adjoint and involutive.
    """

    left: np.ndarray
    right: np.ndarray
    phase: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        for name in ("left", "right"):
            arr = np.array(getattr(self, name), dtype=complex).reshape(2).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "phase", complex(self.phase))


@dataclass(frozen=True, eq=False)
class ShiftOp:
    """Sparse description of a shift operator, one pair per edge.

    ``pairs[n]`` is the pair for the edge ``n -> n+1``.  On a periodic
    window the pair at ``hi`` wraps around to ``lo``, closing the ring.
    """

    window: Window
    pairs: Mapping[int, ShiftPair]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", {int(n): p for n, p in self.pairs.items()})

    def matrix(self) -> np.ndarray:
        """Dense form on the window ring (needs pairs for lo..hi)."""
        win = self.window
        L = win.length
        S = np.zeros((2 * L, 2 * L), dtype=complex)
        for n in win.sites():
            pair = self.pairs[n]
            i = 2 * ((n - win.lo) % L)
            j = 2 * ((n + 1 - win.lo) % L)
            S[j : j + 2, i : i + 2] += pair.phase * np.outer(pair.right, pair.left.conj())
            S[i : i + 2, j : j + 2] += np.conj(pair.phase) * np.outer(
                pair.left, pair.right.conj()
            )
        return S


@dataclass(frozen=True, eq=False)
class ShiftCoinFactorization:
    """``U = S T``: an edge-swapping shift times site-local coins."""

    shift: ShiftOp
    coins: Mapping[int, np.ndarray]
    window: Window

    def coin_matrix(self) -> np.ndarray:
        L = self.window.length
        T = np.zeros((2 * L, 2 * L), dtype=complex)
        for n in self.window.sites():
            i = 2 * (n - self.window.lo)
            T[i : i + 2, i : i + 2] = self.coins[n]
        return T

    def shift_matrix(self) -> np.ndarray:
        return self.shift.matrix()


def factor_shift_coin(w: WalkSpec) -> ShiftCoinFactorization:
    """Split a walk into shift times coin.

    ``T_n`` turns the emitting frame into the receiving one at the same
    site, and ``S`` swaps the two receiving vectors across each edge
    with no phase.  Then ``S = S*``, ``S^2 = 1`` and ``S T`` equals the
    walk operator (checked densely on periodic windows by the tests).
    Typed inputs are re-expressed in general form first.
    """
    _require_valid(w)
    g = _as_general(w)
    win = g.window

    def bases_near(n: int) -> SiteBases:
        try:
            return g.bases_at(n)
        except SupportEscapedWindow:
            return g.bases_at(min(max(n, win.lo), win.hi))

    coins: dict[int, np.ndarray] = {}
    pairs: dict[int, ShiftPair] = {}
    for n in win.sites():
        sb = g.bases[n]
        coins[n] = np.outer(sb.xi_minus, sb.zeta_minus.conj()) + np.outer(
            sb.xi_plus, sb.zeta_plus.conj()
        )
        pairs[n] = ShiftPair(left=sb.xi_plus, right=bases_near(n + 1).xi_minus)
    return ShiftCoinFactorization(
        shift=ShiftOp(win, pairs), coins=coins, window=win
    )
