"""Seeded instance generators shared by the Szegedy tests.

All phases are exact multiples of ``pi/100``, which keeps the library's
congruence arithmetic exact and places every candidate global phase on
the brute-force grid of :mod:`oracle` (see the soundness note there).
Sites with ``r = 0`` ("gaps") carry diagonal coins and drop out of the
constrained-site set; gaps are never adjacent, so consecutive
constrained sites are at most 2 apart.
"""

from __future__ import annotations

import math

import numpy as np

from qwalk1d.angles import PI, ZERO, Angle
from qwalk1d.model import (
    Amp,
    Coin2,
    ConstantTails,
    Periodic,
    WalkSpec,
    Window,
    WindowOnly,
)

DEN = 100


def _phase(rng: np.random.Generator) -> Angle:
    return Angle.from_pi(int(rng.integers(0, 2 * DEN)), DEN)


def _mixing_coin(rng, mu: Angle, nu: Angle) -> Coin2:
    """A unitary coin with the given off-diagonal phases and 0 < r < 1."""
    s = math.sqrt(float(rng.uniform(0.1, 0.9)))
    r = math.sqrt(1.0 - s * s)
    sigma = _phase(rng)
    tau = mu + nu + PI - sigma
    return Coin2(Amp(s, sigma), Amp(r, nu), Amp(r, mu), Amp(s, tau))


def _gap_coin(rng, delta: Angle) -> Coin2:
    """A diagonal coin (r = 0) with determinant phase ``delta``."""
    sigma = _phase(rng)
    return Coin2(Amp(1.0, sigma), Amp(0.0, ZERO), Amp(0.0, ZERO), Amp(1.0, delta - sigma))


def _extension(rng, L: int):
    roll = rng.integers(0, 3)
    if roll == 0:
        return Periodic(L)
    if roll == 1:
        return ConstantTails()
    return WindowOnly()


def rational_walk(seed: int, L: int, gaps: bool = True, vary_extension: bool = False) -> WalkSpec:
    """A random class-1 walk with exact ``pi/100`` phases.

    Generic draws are overwhelmingly not Szegedy walks once two or more
    sites are constrained.
    """
    rng = np.random.default_rng(seed)
    win = Window(0, L - 1)
    coins: dict[int, Coin2] = {}
    prev_gap = True  # no gap at the first site, keeping >= 1 constrained
    for n in win.sites():
        if gaps and not prev_gap and rng.random() < 0.3:
            coins[n] = _gap_coin(rng, _phase(rng))
            prev_gap = True
        else:
            coins[n] = _mixing_coin(rng, _phase(rng), _phase(rng))
            prev_gap = False
    ext = _extension(rng, L) if vary_extension else WindowOnly()
    return WalkSpec.typed(1, coins, win, ext)


def szegedy_walk(seed: int, L: int, gaps: bool = True, vary_extension: bool = False) -> WalkSpec:
    """A class-1 walk that is a Szegedy walk by construction.

    Pick the global phase ``lam`` and the edge phases ``theta`` first
    (all multiples of ``pi/100``), then read the coin phases off the two
    congruences: ``mu_n = theta_n - lam (mod pi)``,
    ``nu_n = -theta_{n-1} - lam (mod pi)`` with parities chosen so the
    determinant phase comes out right, and at gaps
    ``delta_n = theta_n - theta_{n-1} - 2 lam`` outright.
    """
    rng = np.random.default_rng(seed)
    win = Window(0, L - 1)
    lam = Angle.from_pi(int(rng.integers(0, DEN)), DEN)
    ext = _extension(rng, L) if vary_extension else WindowOnly()

    if isinstance(ext, Periodic):
        # a periodic edge-phase profile always satisfies the ring
        # closure, so draw theta on one period and wrap
        thetas = {n: _phase(rng) for n in win.sites()}

        def theta(n: int) -> Angle:
            return thetas[win.lo + (n - win.lo) % L]

    else:
        thetas = {n: _phase(rng) for n in range(win.lo - 1, win.hi + 1)}
        if isinstance(ext, ConstantTails):
            # the repeated edge coin constrains the whole tail, which
            # forces a flat (mod pi) theta profile across each edge
            thetas[win.lo - 1] = thetas[win.lo] + PI * int(rng.integers(0, 2))
            if L > 1:
                thetas[win.hi] = thetas[win.hi - 1] + PI * int(rng.integers(0, 2))

        def theta(n: int) -> Angle:
            return thetas[n]

    coins: dict[int, Coin2] = {}
    prev_gap = True
    for n in win.sites():
        th, th_prev = theta(n), theta(n - 1)
        # edges stay mixing under constant tails: the construction above
        # assumed the clamped tail coin has r > 0
        edge = isinstance(ext, ConstantTails) and n in (win.lo, win.hi)
        if gaps and not prev_gap and not edge and rng.random() < 0.3:
            delta = th - th_prev - 2 * lam
            coins[n] = _gap_coin(rng, delta)
            prev_gap = True
        else:
            k = int(rng.integers(0, 2))
            mu = th - lam + PI * k
            nu = ZERO - th_prev - lam + PI * (1 - k)
            coins[n] = _mixing_coin(rng, mu, nu)
            prev_gap = False
    return WalkSpec.typed(1, coins, win, ext)
