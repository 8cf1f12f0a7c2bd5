"""Exact and floating-point angle arithmetic modulo pi and 2*pi.

Phases are the currency of the congruence systems that decide whether a
walk admits a Szegedy decomposition.  An :class:`Angle` is either an
exact rational multiple of pi (kept as a ``fractions.Fraction``) or a
plain float in radians.  Exact angles stay exact under addition,
negation and integer scaling; as soon as a float angle enters a
computation the result degrades to a float and comparisons fall back to
a tolerance.

The solver :func:`solve_family` treats systems of congruences of the
shape ``2*d*lam = c (mod pi)`` in one unknown ``lam``.  Such a family is
either unconstrained (no congruences), satisfiable by finitely many
``lam`` in ``[0, pi)``, or unsatisfiable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "ANGLE_TOL",
    "Angle",
    "ZERO",
    "PI",
    "TWO_PI",
    "normalize",
    "equal_mod",
    "residual_mod",
    "CongruenceConstraint",
    "SolutionSet",
    "solve_family",
]

ANGLE_TOL = 1e-9
"""Default tolerance for comparisons that involve float angles."""


@dataclass(frozen=True)
class Angle:
    """A phase, stored either exactly as ``frac * pi`` or as float radians.

    Exactly one of the two fields is set.  Use :meth:`from_pi` and
    :meth:`from_radians` instead of the raw constructor.  The rational
    multiple is reduced automatically by ``Fraction``.
    """

    frac: Fraction | None = None
    rad: float | None = None

    def __post_init__(self) -> None:
        if (self.frac is None) == (self.rad is None):
            raise ValueError("exactly one of frac and rad must be given")
        if self.frac is not None and not isinstance(self.frac, Fraction):
            object.__setattr__(self, "frac", Fraction(self.frac))
        if self.rad is not None:
            object.__setattr__(self, "rad", float(self.rad))

    @classmethod
    def from_pi(cls, num: int | Fraction, den: int = 1) -> "Angle":
        """The exact angle ``(num/den) * pi``."""
        return cls(frac=Fraction(num, den))

    @classmethod
    def from_radians(cls, x: float) -> "Angle":
        """A float angle of ``x`` radians."""
        return cls(rad=float(x))

    @property
    def is_exact(self) -> bool:
        return self.frac is not None

    @property
    def radians(self) -> float:
        """Value in radians (float, even for exact angles)."""
        if self.frac is not None:
            return math.pi * self.frac.numerator / self.frac.denominator
        return self.rad  # type: ignore[return-value]

    # -- arithmetic ----------------------------------------------------
    #
    # Exactness is contagious only between exact operands: any operation
    # touching a float angle produces a float angle.

    def __add__(self, other: "Angle") -> "Angle":
        if not isinstance(other, Angle):
            return NotImplemented
        if self.is_exact and other.is_exact:
            return Angle(frac=self.frac + other.frac)
        return Angle(rad=self.radians + other.radians)

    def __sub__(self, other: "Angle") -> "Angle":
        if not isinstance(other, Angle):
            return NotImplemented
        if self.is_exact and other.is_exact:
            return Angle(frac=self.frac - other.frac)
        return Angle(rad=self.radians - other.radians)

    def __neg__(self) -> "Angle":
        if self.is_exact:
            return Angle(frac=-self.frac)
        return Angle(rad=-self.rad)

    def __mul__(self, k: int) -> "Angle":
        if not isinstance(k, int):
            return NotImplemented
        if self.is_exact:
            return Angle(frac=self.frac * k)
        return Angle(rad=self.rad * k)

    __rmul__ = __mul__

    def __truediv__(self, k: int) -> "Angle":
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            raise ZeroDivisionError("angle division by zero")
        if self.is_exact:
            return Angle(frac=self.frac / k)
        return Angle(rad=self.rad / k)

    def __str__(self) -> str:
        if not self.is_exact:
            return f"{self.rad:.12g} rad"
        f = self.frac
        if f == 0:
            return "0"
        num, den = f.numerator, f.denominator
        sign = "-" if num < 0 else ""
        num = abs(num)
        head = "π" if num == 1 else f"{num}π"
        return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"


ZERO = Angle.from_pi(0)
PI = Angle.from_pi(1)
TWO_PI = Angle.from_pi(2)

_MODULI = (PI, TWO_PI)


def _check_modulus(modulus: Angle) -> None:
    if modulus not in _MODULI:
        raise ValueError("modulus must be PI or TWO_PI")


def normalize(a: Angle, modulus: Angle) -> Angle:
    """Reduce ``a`` into ``[0, modulus)``.

    Exact angles are reduced with exact rational arithmetic, float
    angles with ``math.fmod``.  ``modulus`` must be :data:`PI` or
    :data:`TWO_PI`.
    """
    _check_modulus(modulus)
    m = modulus.frac  # 1 or 2
    if a.is_exact:
        return Angle(frac=a.frac % m)
    mf = math.pi * m.numerator
    r = math.fmod(a.rad, mf)
    if r < 0.0:
        r += mf
    if r >= mf:  # fmod dust can land exactly on the modulus
        r -= mf
    return Angle(rad=r)


def equal_mod(a: Angle, b: Angle, modulus: Angle, tol: float = ANGLE_TOL) -> bool:
    """Whether ``a = b (mod modulus)``.

    Exact/exact comparisons are decided exactly and ignore ``tol``;
    otherwise the normalized difference must lie within ``tol`` of 0 or
    of the modulus.
    """
    d = normalize(a - b, modulus)
    if d.is_exact:
        return d.frac == 0
    mf = modulus.radians
    return d.rad <= tol or (mf - d.rad) <= tol


def residual_mod(a: Angle, b: Angle, modulus: Angle) -> float:
    """Distance from ``a - b`` to the nearest multiple of ``modulus``."""
    d = normalize(a - b, modulus)
    r = d.radians
    return min(r, modulus.radians - r)


@dataclass(frozen=True)
class CongruenceConstraint:
    """One congruence ``2*d*lam = c (mod pi)`` on the unknown phase ``lam``.

    ``d`` is the gap between a pair of consecutive constrained sites and
    is at least 1.  The right-hand side ``c`` is normalized into
    ``[0, pi)`` on construction.
    """

    d: int
    c: Angle

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"gap must be >= 1, got {self.d}")
        object.__setattr__(self, "c", normalize(self.c, PI))

    def satisfied_by(self, lam: Angle, tol: float = ANGLE_TOL) -> bool:
        return equal_mod(lam * (2 * self.d), self.c, PI, tol)

    def residual(self, lam: Angle) -> float:
        return residual_mod(lam * (2 * self.d), self.c, PI)


@dataclass(frozen=True)
class SolutionSet:
    """Solutions ``lam`` (mod pi) of a family of congruences.

    ``unconstrained`` marks the empty family, which every angle solves.
    Otherwise ``lambdas`` holds the finitely many solutions in
    ``[0, pi)``, sorted ascending; an empty tuple means the family is
    unsatisfiable.
    """

    unconstrained: bool
    lambdas: tuple[Angle, ...] = ()

    @classmethod
    def every(cls) -> "SolutionSet":
        return cls(True)

    @classmethod
    def finite(cls, lams: Iterable[Angle]) -> "SolutionSet":
        return cls(False, tuple(lams))

    @classmethod
    def empty(cls) -> "SolutionSet":
        return cls(False, ())

    @property
    def is_empty(self) -> bool:
        return not self.unconstrained and not self.lambdas


def solve_family(
    constraints: Sequence[CongruenceConstraint], tol: float = ANGLE_TOL
) -> SolutionSet:
    """Solve ``2*d_k*lam = c_k (mod pi)`` for all ``k`` simultaneously.

    The first congruence pins ``lam`` to the ``2*d_1`` candidates
    ``(c_1 + m*pi) / (2*d_1)``, ``m = 0 .. 2*d_1 - 1``; the remaining
    congruences filter that list.  Candidates are exact whenever ``c_1``
    is exact.  Returns :class:`SolutionSet`.
    """
    cs = list(constraints)
    if not cs:
        return SolutionSet.every()
    first = cs[0]
    survivors: list[Angle] = []
    for m in range(2 * first.d):
        lam = (first.c + PI * m) / (2 * first.d)
        if all(k.satisfied_by(lam, tol) for k in cs[1:]):
            survivors.append(lam)
    survivors.sort(key=lambda a: a.radians)
    deduped: list[Angle] = []
    for lam in survivors:
        if not any(equal_mod(lam, seen, PI, tol) for seen in deduped):
            deduped.append(lam)
    if not deduped:
        return SolutionSet.empty()
    return SolutionSet.finite(deduped)
