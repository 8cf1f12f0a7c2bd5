"""Independent oracles the tests check the library against.

Everything here is written directly from the definitions, using only
the data accessors of :class:`~qwalk1d.model.WalkSpec` (site lookup and
coin matrices), never the library's own solvers or matrix builders.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from qwalk1d.model import Periodic, WalkSpec, WindowOnly

GRID_STEP = math.pi / 20000
GRID_TOL = 1e-6


def dense_c1_matrix(w: WalkSpec) -> np.ndarray:
    """Periodic-ring matrix of a class-1 walk, built by block placement.

    Site ``lo + j`` owns rows/columns ``2j, 2j + 1``.  A class-1 coin
    ``[[a, b], [c, d]]`` at site ``n`` sends ``(a, b)`` to site ``n - 1``
    (top row there) and ``(c, d)`` to site ``n + 1`` (bottom row).
    """
    assert w.is_typed and w.class_k == 1
    L = w.window.length
    M = np.zeros((2 * L, 2 * L), dtype=complex)
    for j in range(L):
        m = w.coins[w.window.lo + j].matrix()
        a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        left, right = (j - 1) % L, (j + 1) % L
        M[2 * left, 2 * j] += a
        M[2 * left, 2 * j + 1] += b
        M[2 * right + 1, 2 * j] += c
        M[2 * right + 1, 2 * j + 1] += d
    return M


def evolve_dense(M: np.ndarray, v: np.ndarray, t: int) -> np.ndarray:
    for _ in range(t):
        v = M @ v
    return v


ZERO_PATTERNS = {
    # (mask of U_{n-1,n}, mask of U_{n+1,n}); True marks a forced zero
    1: (np.array([[False, False], [True, True]]), np.array([[True, True], [False, False]])),
    2: (np.array([[False, True], [False, True]]), np.array([[True, False], [True, False]])),
    3: (np.array([[True, True], [False, False]]), np.array([[False, False], [True, True]])),
    4: (np.array([[True, False], [True, False]]), np.array([[False, True], [False, True]])),
}


def pattern_violation(up: np.ndarray, down: np.ndarray, k: int) -> float:
    """Largest entry where the class-``k`` zero pattern demands a zero.

    ``up`` is the block into site ``n - 1``, ``down`` into ``n + 1``.
    """
    mask_up, mask_down = ZERO_PATTERNS[k]
    return max(
        float(np.max(np.abs(up[mask_up]), initial=0.0)),
        float(np.max(np.abs(down[mask_down]), initial=0.0)),
    )


def _polar_data(w: WalkSpec, sites: list[int]):
    """(mu, delta, constrained) per site, straight from the definitions."""
    mus, deltas, constrained = {}, {}, {}
    for n in sites:
        m = w.coin_at(n).matrix()
        a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        s, r = abs(a), abs(b)
        mus[n] = cmath.phase(c)
        if s > 1e-12:
            deltas[n] = cmath.phase(a) + cmath.phase(d)
        else:
            deltas[n] = cmath.phase(c) + cmath.phase(b) + math.pi
        constrained[n] = r > 1e-12
    return mus, deltas, constrained


def _span_sites(w: WalkSpec) -> list[int]:
    lo, hi = w.window.lo, w.window.hi
    if isinstance(w.extension, Periodic):
        return list(range(lo, hi + w.extension.p + 1))
    if isinstance(w.extension, WindowOnly):
        return list(range(lo, hi + 1))
    return list(range(lo - 2, hi + 3))  # constant tails: two tail sites suffice


def grid_szegedy_feasible(
    w: WalkSpec, step: float = GRID_STEP, tol: float = GRID_TOL
) -> tuple[bool, np.ndarray]:
    """Brute-force Szegedy decision by scanning ``lam`` over ``[0, pi)``.

    For fixed ``lam`` the phases ``theta_n`` are rigid: anchored to
    ``mu + lam`` at the first site with an off-diagonal coin entry and
    propagated by ``theta_n = theta_{n-1} + 2 lam + delta_n``.  The walk
    is a Szegedy walk iff some ``lam`` makes every remaining anchor
    condition hold modulo pi.  Returns (feasible?, feasible lambdas).

    Only sound on instances whose solutions land on grid points: coin
    phases that are multiples of ``pi/100`` with gaps between
    constrained sites dividing 100 put every candidate ``lam`` at a
    multiple of ``pi/20000`` and every off-candidate residual at or
    above ``pi/10000``, far beyond ``tol``.
    """
    sites = _span_sites(w)
    mus, deltas, constrained = _polar_data(w, sites)
    anchors = [n for n in sites if constrained[n]]
    lams = np.arange(0.0, math.pi, step)
    if len(anchors) <= 1:
        return True, lams
    m0 = anchors[0]
    # theta_n - mu_n - lam = 2 (n - m0) lam + (sum of deltas) + mu_m0 - mu_n
    coef, const = [], []
    acc = 0.0
    for n in sites[sites.index(m0) + 1 :]:
        acc += deltas[n]
        if constrained[n]:
            coef.append(2 * (n - m0))
            const.append(acc + mus[m0] - mus[n])
    res = np.mod(np.outer(coef, lams) + np.array(const)[:, None], math.pi)
    res = np.minimum(res, math.pi - res)
    ok = res.max(axis=0) <= tol
    return bool(ok.any()), lams[ok]
