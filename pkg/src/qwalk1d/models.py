"""Ready-made walk families, exact where the construction allows.

All constructors return class-1 typed specs except :func:`random_walk`,
which draws a walk in any requested class.  Phases given as
:class:`~qwalk1d.angles.Angle` (or rational ``alpha``) stay exact all
the way into the congruence analysis.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

import numpy as np

from .angles import PI, ZERO, Angle
from .model import (
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

__all__ = [
    "hadamard",
    "two_coin",
    "kitagawa_a",
    "kitagawa_b",
    "shikano_katsura",
    "random_walk",
    "random_general_walk",
]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _angle(x) -> Angle:
    if isinstance(x, Angle):
        return x
    return Angle.from_radians(float(x))


def hadamard(window: tuple[int, int] = (0, 0)) -> WalkSpec:
    """The translation-invariant walk with coin ``[[1,1],[1,-1]]/sqrt(2)``."""
    coin = Coin2(
        Amp(_INV_SQRT2, ZERO),
        Amp(_INV_SQRT2, ZERO),
        Amp(_INV_SQRT2, ZERO),
        Amp(_INV_SQRT2, PI),
    )
    win = Window(*window)
    return WalkSpec.typed(1, {n: coin for n in win.sites()}, win, Periodic(1))


def two_coin(
    a_plus: complex | Amp,
    nu_plus,
    mu_plus,
    d_plus: complex | Amp,
    r_plus: float,
    a_minus: complex | Amp,
    nu_minus,
    mu_minus,
    d_minus: complex | Amp,
    r_minus: float,
    window: tuple[int, int],
) -> WalkSpec:
    """One coin for ``n >= 0``, another for ``n < 0``, constant tails.

    Each half uses the coin ``[[a, r e^{i nu}], [r e^{i mu}, d]]``; both
    ``r`` must be positive and the parameters unitary-compatible
    (``|a| = |d| = sqrt(1 - r^2)`` and ``arg a + arg d = mu + nu + pi``),
    otherwise the coin constructor raises.  This walk is a Szegedy walk
    exactly when ``mu_plus = mu_minus`` and ``nu_plus = nu_minus``
    modulo pi.
    """

    def half(a, nu, mu, d, r) -> Coin2:
        if float(r) <= 0.0:
            raise ValueError("two_coin needs r > 0 on both halves")
        a_amp = a if isinstance(a, Amp) else Amp.from_complex(a)
        d_amp = d if isinstance(d, Amp) else Amp.from_complex(d)
        coin = Coin2(a_amp, Amp(float(r), _angle(nu)), Amp(float(r), _angle(mu)), d_amp)
        coin.require_unitary()
        return coin

    plus = half(a_plus, nu_plus, mu_plus, d_plus, r_plus)
    minus = half(a_minus, nu_minus, mu_minus, d_minus, r_minus)
    win = Window(*window)
    if not (win.lo < 0 <= win.hi):
        raise ValueError("two_coin window must contain the split at 0")
    coins = {n: (plus if n >= 0 else minus) for n in win.sites()}
    return WalkSpec.typed(1, coins, win, ConstantTails())


def kitagawa_a(omega: Mapping[int, Angle | float], window: tuple[int, int]) -> WalkSpec:
    """Split-step family ``[[e^{i w}, 1], [1, -e^{-i w}]]/sqrt(2)``.

    A Szegedy walk for every phase profile ``omega``.
    """
    win = Window(*window)
    coins = {}
    for n in win.sites():
        w = _angle(omega[n])
        coins[n] = Coin2(
            Amp(_INV_SQRT2, w),
            Amp(_INV_SQRT2, ZERO),
            Amp(_INV_SQRT2, ZERO),
            Amp(_INV_SQRT2, PI - w),
        )
    return WalkSpec.typed(1, coins, win, WindowOnly())


def kitagawa_b(omega: Mapping[int, Angle | float], window: tuple[int, int]) -> WalkSpec:
    """Split-step family ``[[1, e^{i w}], [-e^{-i w}, 1]]/sqrt(2)``.

    A Szegedy walk exactly when the increments ``w_n - w_{n-1}`` are
    constant modulo pi across the window.
    """
    win = Window(*window)
    coins = {}
    for n in win.sites():
        w = _angle(omega[n])
        coins[n] = Coin2(
            Amp(_INV_SQRT2, ZERO),
            Amp(_INV_SQRT2, w),
            Amp(_INV_SQRT2, PI - w),
            Amp(_INV_SQRT2, ZERO),
        )
    return WalkSpec.typed(1, coins, win, WindowOnly())


def shikano_katsura(alpha, window: tuple[int, int]) -> WalkSpec:
    """Site-dependent rotation coins ``R(2*pi*alpha*n)``.

    ``alpha`` rational keeps the entry phases exact (each entry is real,
    so its phase is 0 or pi, and sites where the sine vanishes get an
    exactly zero off-diagonal).  A Szegedy walk for every ``alpha``.
    """
    win = Window(*window)
    alpha_f = Fraction(alpha) if isinstance(alpha, (int, Fraction)) else None

    def real_amp(x: float) -> Amp:
        if abs(x) <= 1e-15:
            return Amp(0.0, ZERO)
        return Amp(abs(x), ZERO if x > 0 else PI)

    coins = {}
    for n in win.sites():
        if alpha_f is not None:
            turns = Fraction(2) * alpha_f * n  # angle in units of pi
            x = math.pi * float(turns)
            cos_v, sin_v = math.cos(x), math.sin(x)
            if turns.denominator == 1:  # angle is a multiple of pi
                sin_v = 0.0
                cos_v = 1.0 if turns.numerator % 2 == 0 else -1.0
            elif (turns * 2).denominator == 1:  # odd multiple of pi/2
                cos_v = 0.0
                sin_v = 1.0 if (turns - Fraction(1, 2)) % 2 == 0 else -1.0
        else:
            x = 2.0 * math.pi * float(alpha) * n
            cos_v, sin_v = math.cos(x), math.sin(x)
        coins[n] = Coin2(
            real_amp(cos_v), real_amp(-sin_v), real_amp(sin_v), real_amp(cos_v)
        )
    return WalkSpec.typed(1, coins, win, WindowOnly())


def _haar_coin(rng: np.random.Generator) -> Coin2:
    """A Haar-like random unitary coin, exactly unitary by construction."""
    s = math.sqrt(rng.uniform())
    r = math.sqrt(max(0.0, 1.0 - s * s))
    sigma, nu, delta = (Angle.from_radians(x) for x in rng.uniform(0, 2 * math.pi, 3))
    tau = delta - sigma
    mu = delta - nu + PI
    return Coin2(Amp(s, sigma), Amp(r, nu), Amp(r, mu), Amp(s, tau))


def _haar_frame(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, rr = np.linalg.qr(z)
    q = q * (np.diagonal(rr) / np.abs(np.diagonal(rr)))
    return q[:, 0], q[:, 1]


def random_walk(
    seed: int,
    window: tuple[int, int],
    k: int = 1,
    extension: Extension | None = None,
) -> WalkSpec:
    """A seeded random walk in typed class ``k``; deterministic per seed.

    Classes 1/3 draw an independent unitary coin per site, or one coin
    per residue class under a periodic extension.  Classes 2/4 draw an
    orthonormal frame per site and wire the coin columns from the
    neighbouring frames, which is exactly the condition for the walk to
    be unitary in those classes.
    """
    if k not in (1, 2, 3, 4):
        raise ValueError(f"typed class must be 1..4, got {k}")
    rng = np.random.default_rng(seed)
    win = Window(*window)
    ext = WindowOnly() if extension is None else extension

    if k in (1, 3):
        if isinstance(ext, Periodic):
            base = {j: _haar_coin(rng) for j in range(ext.p)}
            coins = {n: base[(n - win.lo) % ext.p] for n in win.sites()}
        else:
            coins = {n: _haar_coin(rng) for n in win.sites()}
        return WalkSpec.typed(k, coins, win, ext)

    # classes 2/4: frames on a halo one wider than the window
    frames: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for m in range(win.lo - 1, win.hi + 2):
        frames[m] = _haar_frame(rng)
    if isinstance(ext, ConstantTails):
        # the clamped tail coins must keep the infinite walk unitary,
        # which pins the frames near each edge to the edge frame
        if win.length <= 3:
            for m in range(win.lo - 1, win.hi + 2):
                frames[m] = frames[win.lo]
        else:
            frames[win.lo - 1] = frames[win.lo + 1] = frames[win.lo]
            frames[win.hi - 1] = frames[win.hi + 1] = frames[win.hi]
    if isinstance(ext, Periodic):
        p = ext.p

        def frame(m: int) -> tuple[np.ndarray, np.ndarray]:
            return frames[win.lo + (m - win.lo) % p]

    else:

        def frame(m: int) -> tuple[np.ndarray, np.ndarray]:
            return frames[m]

    coins = {}
    for n in win.sites():
        u_prev = frame(n - 1)[0]
        v_next = frame(n + 1)[1]
        if k == 2:
            m = np.column_stack([u_prev, v_next])  # (a,c) then (b,d)
        else:
            m = np.column_stack([v_next, u_prev])  # (a,c) then (b,d)
        coins[n] = Coin2.from_matrix(m)
    return WalkSpec.typed(k, coins, win, ext)


def random_general_walk(
    seed: int,
    window: tuple[int, int],
    extension: Extension | None = None,
) -> WalkSpec:
    """A seeded random general-form walk: independent Haar frames per site."""
    rng = np.random.default_rng(seed)
    win = Window(*window)
    ext = Periodic(win.length) if extension is None else extension
    bases = {}
    for n in win.sites():
        x1, x2 = _haar_frame(rng)
        z1, z2 = _haar_frame(rng)
        bases[n] = SiteBases(xi_plus=x1, xi_minus=x2, zeta_minus=z1, zeta_plus=z2)
    return WalkSpec.general(bases, win, ext)
