"""Matrix-free evolution of finitely supported states.

States live on the whole line; one step scatters each site's two
components to the two neighbouring sites according to the walk's class
(or, in general form, to the site frames).  Nothing is ever truncated:
with a periodic or constant-tails extension the support simply grows by
at most one site per side per step, which makes the results exact
infinite-lattice amplitudes.  Window-only walks raise
:class:`SupportEscapedWindow` as soon as the evolution would need data
outside the window.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from . import canonical
from .model import (
    SupportEscapedWindow,
    UNITARY_TOL,
    Periodic,
    WalkSpec,
)

__all__ = [
    "State",
    "step",
    "distribution",
    "verify_equivalence_distributions",
    "is_translation_invariant",
    "SupportEscapedWindow",
]


class State:
    """A finitely supported two-component amplitude field on Z.

    Stored as ``site -> ndarray(2)``; zero vectors are dropped only when
    exactly zero on construction.  The factory normalizes to unit norm.
    """

    __slots__ = ("_amp",)

    def __init__(self, amplitudes: Mapping[int, np.ndarray], _normalize: bool = True):
        amp: dict[int, np.ndarray] = {}
        for n, v in amplitudes.items():
            arr = np.array(v, dtype=complex).reshape(2)
            if arr.any():
                amp[int(n)] = arr
        if not amp:
            raise ValueError("state must have nonzero support")
        if _normalize:
            nrm = np.sqrt(sum(float(np.vdot(v, v).real) for v in amp.values()))
            for n in amp:
                amp[n] = amp[n] / nrm
        self._amp = amp

    @classmethod
    def at_site(cls, n: int, c1: complex = 1.0, c2: complex = 0.0) -> "State":
        return cls({n: np.array([c1, c2], dtype=complex)})

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._amp))

    def __getitem__(self, n: int) -> np.ndarray:
        return self._amp.get(n, np.zeros(2, dtype=complex))

    def items(self):
        return sorted(self._amp.items())

    def norm(self) -> float:
        return float(np.sqrt(sum(np.vdot(v, v).real for v in self._amp.values())))

    def probabilities(self) -> dict[int, float]:
        return {n: float(np.vdot(v, v).real) for n, v in self.items()}


def step(w: WalkSpec, psi: State) -> State:
    """Apply the walk once.  Norm-preserving for a valid spec."""
    out: dict[int, np.ndarray] = {}

    def acc(n: int) -> np.ndarray:
        v = out.get(n)
        if v is None:
            v = np.zeros(2, dtype=complex)
            out[n] = v
        return v

    if w.is_typed:
        k = w.class_k
        for n, v in psi.items():
            coin = w.coin_at(n)
            a, b = coin.a.value, coin.b.value
            c, d = coin.c.value, coin.d.value
            p1, p2 = v[0], v[1]
            if k == 1:
                acc(n - 1)[0] += a * p1 + b * p2
                acc(n + 1)[1] += c * p1 + d * p2
            elif k == 2:
                left = acc(n - 1)
                left[0] += a * p1
                left[1] += c * p1
                right = acc(n + 1)
                right[0] += b * p2
                right[1] += d * p2
            elif k == 3:
                acc(n - 1)[1] += c * p1 + d * p2
                acc(n + 1)[0] += a * p1 + b * p2
            else:
                left = acc(n - 1)
                left[0] += b * p2
                left[1] += d * p2
                right = acc(n + 1)
                right[0] += a * p1
                right[1] += c * p1
    else:
        for n, v in psi.items():
            sb = w.bases_at(n)
            to_left = complex(np.vdot(sb.zeta_minus, v))
            to_right = complex(np.vdot(sb.zeta_plus, v))
            acc(n - 1)[:] += to_left * w.bases_at(n - 1).xi_plus
            acc(n + 1)[:] += to_right * w.bases_at(n + 1).xi_minus

    return State(out, _normalize=False)


def distribution(w: WalkSpec, psi0: State, t: int) -> dict[int, float]:
    """Site occupation probabilities after ``t`` steps."""
    if t < 0:
        raise ValueError("negative step count")
    psi = psi0
    for _ in range(t):
        psi = step(w, psi)
    return psi.probabilities()


def _transform_state(w: WalkSpec, fam: "canonical.SiteUnitaryFamily", psi: State) -> State:
    moved = {
        n: fam.at(n, w.extension) @ v for n, v in psi.items()
    }
    return State(moved, _normalize=False)


def verify_equivalence_distributions(
    w: WalkSpec,
    fam: "canonical.SiteUnitaryFamily",
    psi0: State,
    T: int,
) -> float:
    """Largest distribution deviation between a walk and its conjugate.

    Evolves ``psi0`` under ``w`` and ``fam * psi0`` under the conjugated
    walk for ``t = 0 .. T`` and returns the maximum over ``t`` and sites
    of the absolute probability difference.  Site-wise conjugation
    preserves distributions, so for a correct implementation the value
    is limited only by rounding.
    """
    w2 = canonical.apply_equivalence(w, fam)
    psi, phi = psi0, _transform_state(w, fam, psi0)
    worst = 0.0
    for t in range(T + 1):
        if t > 0:
            psi = step(w, psi)
            phi = step(w2, phi)
        p, q = psi.probabilities(), phi.probabilities()
        for n in set(p) | set(q):
            worst = max(worst, abs(p.get(n, 0.0) - q.get(n, 0.0)))
    return worst


def is_translation_invariant(w: WalkSpec, tol: float = UNITARY_TOL) -> bool:
    """Whether the description is manifestly translation invariant.

    True when the extension is periodic and every window site carries
    the same coin (or the same site frames), i.e. the description is
    reducible to a one-site period.  Constant-tail or window-only
    descriptions are never reported invariant, even if their sites all
    agree: the predicate is about the stored description.
    """
    if not isinstance(w.extension, Periodic):
        return False
    sites = list(w.window.sites())
    first = sites[0]
    if w.is_typed:
        ref = w.coins[first].matrix()
        return all(
            float(np.abs(w.coins[n].matrix() - ref).max()) <= tol for n in sites[1:]
        )
    ref_b = w.bases[first]
    return all(w.bases[n].close_to(ref_b, tol) for n in sites[1:])
