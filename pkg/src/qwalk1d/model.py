"""Coins, site frames and walk specifications on the integer line.

A walk moves a two-component amplitude between nearest-neighbour sites
of Z.  It is stored over a finite window of sites together with an
extension policy saying how the description continues outside:

* ``Periodic(p)``   -- coins repeat with period ``p`` over all of Z,
* ``ConstantTails`` -- coins are frozen at the window edges,
* ``WindowOnly``    -- nothing is known outside; evolution stops and
  analyses restrict themselves to the window.

Two storage forms coexist.  The *general form* keeps, per site, two
orthonormal frames: the vectors that receive amplitude hopping in from
the right/left neighbour and the vectors whose coefficients are emitted
to the left/right.  The *typed form* fixes one of four standard channel
conventions (classes 1-4) and keeps a single 2x2 coin per site:

    class 1:  U[n-1,n] = [[a,b],[0,0]],  U[n+1,n] = [[0,0],[c,d]]
    class 2:  U[n-1,n] = [[a,0],[c,0]],  U[n+1,n] = [[0,b],[0,d]]
    class 3:  U[n-1,n] = [[0,0],[c,d]],  U[n+1,n] = [[a,b],[0,0]]
    class 4:  U[n-1,n] = [[0,b],[0,d]],  U[n+1,n] = [[a,0],[c,0]]

Class 1 is the row convention (coin rows feed the left/right moving
channels), class 2 the column convention, classes 3 and 4 their mirror
images.  For classes 1 and 3 the walk is unitary exactly when every
site coin is unitary.  For classes 2 and 4 the coin columns are vectors
at *neighbouring* sites, so walk unitarity couples neighbours: both
columns must be unit vectors and the column of coin ``n+1`` landing at
site ``n`` must be orthogonal to the column of coin ``n-1`` landing
there.  ``validate`` checks the criterion appropriate to the class.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Union

import numpy as np

from .angles import ANGLE_TOL, PI, TWO_PI, ZERO, Angle, normalize

__all__ = [
    "UNITARY_TOL",
    "ACCEPT_TOL",
    "MAG_ZERO_TOL",
    "NotUnitary",
    "UnsupportedBoundary",
    "InvalidSpec",
    "SupportEscapedWindow",
    "Amp",
    "Coin2",
    "PolarCoin",
    "polar_form",
    "SiteBases",
    "Window",
    "Periodic",
    "ConstantTails",
    "WindowOnly",
    "Extension",
    "WalkSpec",
    "SiteDiagnostics",
    "DiagnosticsReport",
    "validate",
    "unitary_on_window",
]

UNITARY_TOL = 1e-12
"""Residual level targeted by the constructors in this package."""

ACCEPT_TOL = 1e-9
"""Residual level above which validation rejects an input."""

MAG_ZERO_TOL = 1e-12
"""Moduli below this are treated as exactly zero (tie-breaking)."""


class NotUnitary(ValueError):
    """A matrix that must be unitary is not, beyond tolerance."""


class UnsupportedBoundary(ValueError):
    """The requested operation needs a periodic window."""


class InvalidSpec(ValueError):
    """A walk specification failed validation."""


class SupportEscapedWindow(LookupError):
    """A site outside a window-only description was addressed."""


# ---------------------------------------------------------------------------
# complex amplitudes in polar form


_QUARTER_TABLE = {
    Fraction(0): 1.0 + 0.0j,
    Fraction(1, 2): 1.0j,
    Fraction(1): -1.0 + 0.0j,
    Fraction(3, 2): -1.0j,
}


@dataclass(frozen=True)
class Amp:
    """A complex amplitude ``mag * exp(i*arg)``.

    Carrying the phase as an :class:`Angle` keeps rationally quantized
    phases exact through determinant and congruence computations;
    magnitudes are always floats.
    """

    mag: float
    arg: Angle

    def __post_init__(self) -> None:
        object.__setattr__(self, "mag", float(self.mag))
        if self.mag < 0.0:
            raise ValueError("amplitude modulus must be >= 0")

    @classmethod
    def from_complex(cls, z: complex) -> "Amp":
        """Polar form of ``z``; phases on the real/imaginary axes stay exact."""
        z = complex(z)
        m = abs(z)
        if m <= MAG_ZERO_TOL:
            return cls(0.0, ZERO)
        if z.imag == 0.0:
            return cls(m, ZERO if z.real > 0 else PI)
        if z.real == 0.0:
            return cls(m, Angle.from_pi(1, 2) if z.imag > 0 else Angle.from_pi(3, 2))
        return cls(m, Angle.from_radians(math.atan2(z.imag, z.real)))

    @property
    def value(self) -> complex:
        if self.mag == 0.0:
            return 0.0 + 0.0j
        a = self.arg
        if a.is_exact:
            q = a.frac % 2
            unit = _QUARTER_TABLE.get(q)
            if unit is not None:
                return self.mag * unit
        return self.mag * cmath.exp(1j * a.radians)

    def conjugate(self) -> "Amp":
        return Amp(self.mag, -self.arg)


# ---------------------------------------------------------------------------
# coins


@dataclass(frozen=True)
class Coin2:
    """A 2x2 coin with entries ``[[a, b], [c, d]]`` stored as amplitudes."""

    a: Amp
    b: Amp
    c: Amp
    d: Amp

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "Coin2":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"coin must be 2x2, got shape {m.shape}")
        return cls(
            Amp.from_complex(m[0, 0]),
            Amp.from_complex(m[0, 1]),
            Amp.from_complex(m[1, 0]),
            Amp.from_complex(m[1, 1]),
        )

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.a.value, self.b.value], [self.c.value, self.d.value]],
            dtype=complex,
        )

    def unitarity_residual(self) -> float:
        m = self.matrix()
        return float(np.abs(m.conj().T @ m - np.eye(2)).max())

    def require_unitary(self, tol: float = ACCEPT_TOL, site: int | None = None) -> None:
        res = self.unitarity_residual()
        if res > tol:
            where = "" if site is None else f" at site {site}"
            raise NotUnitary(f"coin{where} is not unitary (residual {res:.3e})")


@dataclass(frozen=True)
class PolarCoin:
    """Polar parameters of a unitary coin.

    ``s`` and ``r`` are the moduli of the diagonal entries (a, d) and of
    the off-diagonal entries (b, c); ``sigma``, ``nu``, ``mu``, ``tau``
    their phases in the same order the entries are read (a, b, c, d),
    and ``delta`` the phase of the determinant.  All phases are
    normalized into ``[0, 2*pi)``.
    """

    s: float
    r: float
    sigma: Angle
    nu: Angle
    mu: Angle
    tau: Angle
    delta: Angle

    def coin(self) -> Coin2:
        return Coin2(
            Amp(self.s, self.sigma),
            Amp(self.r, self.nu),
            Amp(self.r, self.mu),
            Amp(self.s, self.tau),
        )


def polar_form(coin: Coin2, tol: float = ACCEPT_TOL) -> PolarCoin:
    """Read off the polar parameters of a unitary coin.

    Tie-breaking: when ``r`` (resp. ``s``) vanishes below
    :data:`MAG_ZERO_TOL`, it is set to exactly 0 and the two phases it
    multiplies to exactly 0.  The determinant phase is taken from the
    diagonal pair when ``s > 0`` and from the off-diagonal pair
    otherwise; for a unitary coin the two recipes agree.

    Raises :class:`NotUnitary` when the coin fails unitarity at ``tol``.
    """
    coin.require_unitary(tol)
    s = 0.5 * (coin.a.mag + coin.d.mag)
    r = 0.5 * (coin.b.mag + coin.c.mag)
    if s < MAG_ZERO_TOL:
        s = 0.0
        sigma = tau = ZERO
    else:
        sigma = normalize(coin.a.arg, TWO_PI)
        tau = normalize(coin.d.arg, TWO_PI)
    if r < MAG_ZERO_TOL:
        r = 0.0
        mu = nu = ZERO
    else:
        nu = normalize(coin.b.arg, TWO_PI)
        mu = normalize(coin.c.arg, TWO_PI)
    if s > 0.0:
        delta = normalize(sigma + tau, TWO_PI)
    else:
        delta = normalize(mu + nu + PI, TWO_PI)
    return PolarCoin(s=s, r=r, sigma=sigma, nu=nu, mu=mu, tau=tau, delta=delta)


# ---------------------------------------------------------------------------
# general-form site frames


def _locked2(v) -> np.ndarray:
    arr = np.array(v, dtype=complex).reshape(2).copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SiteBases:
    """The two orthonormal frames a general-form walk keeps at one site.

    ``xi_plus`` receives the amplitude hopping in from the right
    neighbour and ``xi_minus`` from the left one; together they form an
    orthonormal basis.  ``zeta_minus`` and ``zeta_plus`` are the second
    orthonormal frame: the coefficient of the state along ``zeta_minus``
    is emitted to the left neighbour and along ``zeta_plus`` to the
    right one.
    """

    xi_plus: np.ndarray
    xi_minus: np.ndarray
    zeta_minus: np.ndarray
    zeta_plus: np.ndarray

    def __post_init__(self) -> None:
        for name in ("xi_plus", "xi_minus", "zeta_minus", "zeta_plus"):
            object.__setattr__(self, name, _locked2(getattr(self, name)))

    def onb_residual(self) -> float:
        """How far the two frames are from being orthonormal bases."""
        res = 0.0
        for u, v in ((self.xi_plus, self.xi_minus), (self.zeta_minus, self.zeta_plus)):
            f = np.column_stack([u, v])
            res = max(res, float(np.abs(f.conj().T @ f - np.eye(2)).max()))
        return res

    def close_to(self, other: "SiteBases", tol: float = UNITARY_TOL) -> bool:
        return all(
            float(np.abs(getattr(self, k) - getattr(other, k)).max()) <= tol
            for k in ("xi_plus", "xi_minus", "zeta_minus", "zeta_plus")
        )


# ---------------------------------------------------------------------------
# windows and extensions


@dataclass(frozen=True)
class Window:
    """An inclusive integer interval ``[lo, hi]`` of sites."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    def sites(self) -> range:
        return range(self.lo, self.hi + 1)

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def index(self, n: int) -> int:
        return n - self.lo


@dataclass(frozen=True)
class Periodic:
    """Coins repeat over all of Z with period ``p``."""

    p: int

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError("period must be >= 1")


@dataclass(frozen=True)
class ConstantTails:
    """Coins outside the window equal the nearest window-edge coin."""


@dataclass(frozen=True)
class WindowOnly:
    """No extension: sites outside the window are undefined."""


Extension = Union[Periodic, ConstantTails, WindowOnly]


# ---------------------------------------------------------------------------
# walk specifications


@dataclass(frozen=True, eq=False)
class WalkSpec:
    """A nearest-neighbour walk over a window, typed or general.

    Exactly one of ``coins`` (typed form, with ``class_k`` in 1..4) and
    ``bases`` (general form, ``class_k is None``) is populated, covering
    every window site.  Use the :meth:`typed` and :meth:`general`
    factories.
    """

    window: Window
    extension: Extension
    class_k: int | None = None
    coins: Mapping[int, Coin2] | None = None
    bases: Mapping[int, SiteBases] | None = None

    def __post_init__(self) -> None:
        if (self.coins is None) == (self.bases is None):
            raise ValueError("exactly one of coins and bases must be given")
        if self.coins is not None and self.class_k not in (1, 2, 3, 4):
            raise ValueError(f"typed class must be 1..4, got {self.class_k}")
        if self.bases is not None and self.class_k is not None:
            raise ValueError("general form takes no class")
        table = self.coins if self.coins is not None else self.bases
        missing = [n for n in self.window.sites() if n not in table]
        if missing:
            raise ValueError(f"sites missing from spec: {missing}")
        if isinstance(self.extension, Periodic):
            if self.window.length % self.extension.p != 0:
                raise ValueError(
                    f"window length {self.window.length} not divisible by "
                    f"period {self.extension.p}"
                )

    @classmethod
    def typed(
        cls,
        k: int,
        coins: Mapping[int, Coin2],
        window: Window,
        extension: Extension,
    ) -> "WalkSpec":
        return cls(window=window, extension=extension, class_k=k, coins=dict(coins))

    @classmethod
    def general(
        cls,
        bases: Mapping[int, SiteBases],
        window: Window,
        extension: Extension,
    ) -> "WalkSpec":
        return cls(window=window, extension=extension, bases=dict(bases))

    @property
    def is_typed(self) -> bool:
        return self.coins is not None

    def resolve_site(self, n: int) -> int:
        """Map an arbitrary site onto the window site that describes it."""
        w = self.window
        if n in w:
            return n
        if isinstance(self.extension, Periodic):
            return w.lo + (n - w.lo) % w.length
        if isinstance(self.extension, ConstantTails):
            return w.lo if n < w.lo else w.hi
        raise SupportEscapedWindow(f"site {n} outside window [{w.lo}, {w.hi}]")

    def coin_at(self, n: int) -> Coin2:
        if self.coins is None:
            raise TypeError("coin_at on a general-form spec")
        return self.coins[self.resolve_site(n)]

    def bases_at(self, n: int) -> SiteBases:
        if self.bases is None:
            raise TypeError("bases_at on a typed spec")
        return self.bases[self.resolve_site(n)]


# ---------------------------------------------------------------------------
# validation


@dataclass
class SiteDiagnostics:
    """Residuals gathered for one site during validation."""

    site: int
    unitarity_residual: float = 0.0
    onb_residual: float = 0.0
    cross_residual: float = 0.0
    block_rank_ok: bool = True
    messages: list[str] = field(default_factory=list)

    @property
    def worst(self) -> float:
        return max(self.unitarity_residual, self.onb_residual, self.cross_residual)


@dataclass
class DiagnosticsReport:
    """Outcome of :func:`validate`: per-site residuals plus structure notes."""

    sites: list[SiteDiagnostics]
    messages: list[str] = field(default_factory=list)
    structure_ok: bool = True
    tol: float = ACCEPT_TOL

    @property
    def max_residual(self) -> float:
        return max((s.worst for s in self.sites), default=0.0)

    @property
    def ok(self) -> bool:
        return (
            self.structure_ok
            and all(s.block_rank_ok for s in self.sites)
            and self.max_residual <= self.tol
        )

    def lines(self) -> list[str]:
        out = list(self.messages)
        for s in self.sites:
            flags = "" if s.block_rank_ok else "  RANK-DEFECT"
            out.append(
                f"site {s.site:+d}: unitarity {s.unitarity_residual:.3e}  "
                f"onb {s.onb_residual:.3e}  cross {s.cross_residual:.3e}{flags}"
            )
            out.extend(f"  - {m}" for m in s.messages)
        out.append(f"max residual {self.max_residual:.3e} (tol {self.tol:.1e})")
        out.append("OK" if self.ok else "NOT OK")
        return out


def _incoming_columns(w: WalkSpec, m: int) -> tuple[np.ndarray, np.ndarray] | None:
    """For classes 2/4: the two coin columns landing at site ``m``.

    Returns None when a needed neighbour is outside a window-only spec.
    """
    try:
        right = w.coin_at(m + 1)
        left = w.coin_at(m - 1)
    except SupportEscapedWindow:
        return None
    if w.class_k == 2:
        v1 = np.array([right.a.value, right.c.value])
        v2 = np.array([left.b.value, left.d.value])
    else:  # class 4
        v1 = np.array([right.b.value, right.d.value])
        v2 = np.array([left.a.value, left.c.value])
    return v1, v2


def validate(w: WalkSpec, tol: float = ACCEPT_TOL) -> DiagnosticsReport:
    """Check that ``w`` describes a unitary nearest-neighbour walk.

    Typed classes 1/3 require each site coin to be unitary.  Typed
    classes 2/4 require unit column norms per site and orthogonality of
    the two neighbour columns meeting at each site (the walk-level
    criterion; sitewise coin unitarity is neither necessary nor
    sufficient there).  General form requires both site frames to be
    orthonormal.  Periodic specs additionally must repeat in-window with
    the declared period.
    """
    report = DiagnosticsReport(sites=[], tol=tol)
    for n in w.window.sites():
        diag = SiteDiagnostics(site=n)
        if w.is_typed:
            coin = w.coins[n]
            if w.class_k in (1, 3):
                diag.unitarity_residual = coin.unitarity_residual()
                row_norms = (
                    math.hypot(coin.a.mag, coin.b.mag),
                    math.hypot(coin.c.mag, coin.d.mag),
                )
                diag.block_rank_ok = min(row_norms) > tol
            else:
                m = coin.matrix()
                col_norms = (np.linalg.norm(m[:, 0]), np.linalg.norm(m[:, 1]))
                diag.unitarity_residual = float(
                    max(abs(col_norms[0] - 1.0), abs(col_norms[1] - 1.0))
                )
                diag.block_rank_ok = float(min(col_norms)) > tol
                cols = _incoming_columns(w, n)
                if cols is None:
                    diag.messages.append(
                        "cross-orthogonality not checkable at window edge"
                    )
                else:
                    diag.cross_residual = float(abs(np.vdot(cols[0], cols[1])))
                if isinstance(w.extension, ConstantTails) and n in (
                    w.window.lo,
                    w.window.hi,
                ):
                    # the clamped tail repeats this coin over a half-line,
                    # which adds the virtual-site condition just outside
                    virtual = w.window.lo - 1 if n == w.window.lo else w.window.hi + 1
                    tail = _incoming_columns(w, virtual)
                    if tail is not None:
                        res = float(abs(np.vdot(tail[0], tail[1])))
                        if res > diag.cross_residual:
                            diag.cross_residual = res
                        if res > tol:
                            diag.messages.append(
                                f"tail coin breaks orthogonality past site {n}"
                            )
        else:
            sb = w.bases[n]
            diag.onb_residual = sb.onb_residual()
        report.sites.append(diag)

    ext = w.extension
    if isinstance(ext, Periodic) and ext.p < w.window.length:
        worst = 0.0
        for n in range(w.window.lo, w.window.hi + 1 - ext.p):
            if w.is_typed:
                dev = float(
                    np.abs(w.coins[n].matrix() - w.coins[n + ext.p].matrix()).max()
                )
            else:
                a, b = w.bases[n], w.bases[n + ext.p]
                dev = max(
                    float(np.abs(getattr(a, k) - getattr(b, k)).max())
                    for k in ("xi_plus", "xi_minus", "zeta_minus", "zeta_plus")
                )
            worst = max(worst, dev)
        if worst > tol:
            report.structure_ok = False
            report.messages.append(
                f"declared period {ext.p} broken in-window (deviation {worst:.3e})"
            )
    return report


# ---------------------------------------------------------------------------
# dense matrix on a periodic window


def unitary_on_window(w: WalkSpec) -> np.ndarray:
    """Assemble the walk operator on the periodic closure of the window.

    Sites are laid out in ascending order, two components each, and the
    window wraps around (site ``hi + 1`` is site ``lo``).  Only periodic
    specs close up into a finite unitary; anything else raises
    :class:`UnsupportedBoundary`.  Intended as the dense test oracle for
    the matrix-free evolution and for equivalence checks.
    """
    if not isinstance(w.extension, Periodic):
        raise UnsupportedBoundary("dense window matrix needs a Periodic spec")
    win = w.window
    L = win.length
    M = np.zeros((2 * L, 2 * L), dtype=complex)

    def blk(n: int) -> int:
        return 2 * ((n - win.lo) % L)

    for n in win.sites():
        col = blk(n)
        left, right = blk(n - 1), blk(n + 1)
        if w.is_typed:
            a, b = w.coins[n].a.value, w.coins[n].b.value
            c, d = w.coins[n].c.value, w.coins[n].d.value
            k = w.class_k
            if k == 1:
                M[left + 0, col + 0] += a
                M[left + 0, col + 1] += b
                M[right + 1, col + 0] += c
                M[right + 1, col + 1] += d
            elif k == 2:
                M[left + 0, col + 0] += a
                M[left + 1, col + 0] += c
                M[right + 0, col + 1] += b
                M[right + 1, col + 1] += d
            elif k == 3:
                M[left + 1, col + 0] += c
                M[left + 1, col + 1] += d
                M[right + 0, col + 0] += a
                M[right + 0, col + 1] += b
            else:
                M[left + 0, col + 1] += b
                M[left + 1, col + 1] += d
                M[right + 0, col + 0] += a
                M[right + 1, col + 0] += c
        else:
            sb = w.bases[n]
            xi_l = w.bases[win.lo + (n - 1 - win.lo) % L].xi_plus
            xi_r = w.bases[win.lo + (n + 1 - win.lo) % L].xi_minus
            M[left : left + 2, col : col + 2] += np.outer(xi_l, sb.zeta_minus.conj())
            M[right : right + 2, col : col + 2] += np.outer(xi_r, sb.zeta_plus.conj())
    return M
