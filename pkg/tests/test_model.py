import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qwalk1d.angles import PI, ZERO, Angle
from qwalk1d.model import (
    ACCEPT_TOL,
    Amp,
    Coin2,
    ConstantTails,
    NotUnitary,
    Periodic,
    SiteBases,
    SupportEscapedWindow,
    UnsupportedBoundary,
    WalkSpec,
    Window,
    WindowOnly,
    polar_form,
    unitary_on_window,
    validate,
)
from qwalk1d.models import hadamard, random_general_walk, random_walk

INV_SQRT2 = 1.0 / math.sqrt(2.0)


# ---------------------------------------------------------------------------
# Amp


def test_amp_from_complex_axis_phases_are_exact():
    assert Amp.from_complex(2.0).arg.frac == 0
    assert Amp.from_complex(-3.0).arg.frac == 1
    assert Amp.from_complex(4j).arg.frac == Fraction(1, 2)
    assert Amp.from_complex(-5j).arg.frac == Fraction(3, 2)
    assert Amp.from_complex(0.0).mag == 0.0


def test_amp_from_complex_generic_phase():
    a = Amp.from_complex(1 + 1j)
    assert not a.arg.is_exact
    assert a.arg.radians == pytest.approx(math.pi / 4)
    assert a.mag == pytest.approx(math.sqrt(2.0))


def test_amp_value_quarter_turns_exact():
    assert Amp(2.0, Angle.from_pi(1, 2)).value == 2j
    assert Amp(1.0, Angle.from_pi(5, 2)).value == 1j  # reduced mod 2
    assert Amp(3.0, PI).value == -3.0 + 0j
    assert Amp(1.5, ZERO).value == 1.5 + 0j


def test_amp_roundtrip():
    for z in (0.3 - 0.4j, -1j, 2.0, -0.7 + 0.1j):
        assert Amp.from_complex(z).value == pytest.approx(z, abs=1e-15)


def test_amp_conjugate():
    a = Amp(2.0, Angle.from_pi(1, 3))
    assert a.conjugate().value == pytest.approx(np.conj(a.value), abs=1e-15)


def test_amp_rejects_negative_modulus():
    with pytest.raises(ValueError):
        Amp(-1.0, ZERO)


# ---------------------------------------------------------------------------
# Coin2 and polar form


def _hadamard_coin() -> Coin2:
    return Coin2(
        Amp(INV_SQRT2, ZERO),
        Amp(INV_SQRT2, ZERO),
        Amp(INV_SQRT2, ZERO),
        Amp(INV_SQRT2, PI),
    )


def test_coin_matrix_and_unitarity():
    coin = _hadamard_coin()
    m = coin.matrix()
    assert np.allclose(m, np.array([[1, 1], [1, -1]]) * INV_SQRT2, atol=0)
    assert coin.unitarity_residual() < 1e-15
    coin.require_unitary()  # must not raise


def test_require_unitary_raises_and_names_site():
    bad = Coin2(Amp(1.0, ZERO), Amp(1.0, ZERO), Amp(0.0, ZERO), Amp(0.0, ZERO))
    with pytest.raises(NotUnitary, match="site 3"):
        bad.require_unitary(site=3)


def test_polar_form_hadamard():
    p = polar_form(_hadamard_coin())
    assert p.s == pytest.approx(INV_SQRT2, abs=0)
    assert p.r == pytest.approx(INV_SQRT2, abs=0)
    assert p.sigma.frac == 0 and p.nu.frac == 0 and p.mu.frac == 0
    assert p.tau.frac == 1
    assert p.delta.frac == 1  # determinant phase pi


def test_polar_form_identity():
    p = polar_form(Coin2.from_matrix(np.eye(2)))
    assert p.s == 1.0 and p.r == 0.0
    assert p.mu.frac == 0 and p.nu.frac == 0  # zeroed with the modulus
    assert p.delta.frac == 0


def test_polar_form_offdiagonal_determinant_branch():
    # [[0, 1], [i, 0]]: s = 0, delta from mu + nu + pi
    p = polar_form(Coin2.from_matrix(np.array([[0, 1], [1j, 0]])))
    assert p.s == 0.0 and p.r == 1.0
    assert p.mu.frac == Fraction(1, 2)
    assert p.delta.frac == Fraction(3, 2)  # 1/2 + 0 + 1


def test_polar_form_rejects_nonunitary():
    with pytest.raises(NotUnitary):
        polar_form(Coin2.from_matrix(np.array([[1.0, 0.5], [0.0, 1.0]])))


def test_polar_form_roundtrip_exact_phases():
    coin = Coin2(
        Amp(0.6, Angle.from_pi(1, 3)),
        Amp(0.8, Angle.from_pi(1, 5)),
        Amp(0.8, Angle.from_pi(2, 7)),
        Amp(0.6, Angle.from_pi(1, 5) + Angle.from_pi(2, 7) + PI - Angle.from_pi(1, 3)),
    )
    p = polar_form(coin)
    assert p.sigma.is_exact and p.delta.is_exact
    assert p.delta.frac == (Angle.from_pi(1, 5) + Angle.from_pi(2, 7) + PI).frac % 2
    back = p.coin()
    assert np.allclose(back.matrix(), coin.matrix(), atol=1e-15)


@given(st.integers(0, 10**6))
def test_polar_form_roundtrip_random_unitaries(seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    coin = Coin2.from_matrix(q)
    p = polar_form(coin)
    assert np.abs(p.coin().matrix() - coin.matrix()).max() < 1e-12
    # the determinant phase really is the phase of det
    det = np.linalg.det(q)
    assert math.cos(p.delta.radians) == pytest.approx(det.real / abs(det), abs=1e-9)
    assert math.sin(p.delta.radians) == pytest.approx(det.imag / abs(det), abs=1e-9)


# ---------------------------------------------------------------------------
# windows, extensions, WalkSpec plumbing


def test_window_basics():
    w = Window(-2, 3)
    assert w.length == 6
    assert list(w.sites()) == [-2, -1, 0, 1, 2, 3]
    assert 0 in w and 4 not in w
    assert w.index(-2) == 0
    with pytest.raises(ValueError):
        Window(1, 0)


def test_periodic_requires_positive_period():
    with pytest.raises(ValueError):
        Periodic(0)


def test_walkspec_requires_full_coverage():
    coin = _hadamard_coin()
    with pytest.raises(ValueError, match="missing"):
        WalkSpec.typed(1, {0: coin}, Window(0, 1), WindowOnly())


def test_walkspec_period_must_divide_window():
    coin = _hadamard_coin()
    coins = {n: coin for n in range(3)}
    with pytest.raises(ValueError, match="divisible"):
        WalkSpec.typed(1, coins, Window(0, 2), Periodic(2))


def test_walkspec_exclusive_forms():
    coin = _hadamard_coin()
    with pytest.raises(ValueError):
        WalkSpec(window=Window(0, 0), extension=WindowOnly())
    with pytest.raises(ValueError):
        WalkSpec.typed(5, {0: coin}, Window(0, 0), WindowOnly())


def test_resolve_site_periodic():
    w = hadamard((0, 3))  # periodic with p = 1
    assert w.resolve_site(5) == 1
    assert w.resolve_site(-1) == 3
    w2 = random_walk(1, (0, 3), k=1, extension=Periodic(2))
    assert w2.resolve_site(4) == 0
    assert w2.resolve_site(-1) == 3
    assert np.allclose(w2.coin_at(4).matrix(), w2.coins[0].matrix())


def test_resolve_site_tails_and_window_only():
    w = random_walk(2, (0, 3), k=1, extension=ConstantTails())
    assert w.resolve_site(-7) == 0
    assert w.resolve_site(9) == 3
    v = random_walk(2, (0, 3), k=1)
    with pytest.raises(SupportEscapedWindow):
        v.resolve_site(4)


def test_coin_at_wrong_form():
    g = random_general_walk(0, (0, 1))
    with pytest.raises(TypeError):
        g.coin_at(0)
    t = hadamard()
    with pytest.raises(TypeError):
        t.bases_at(0)


def test_site_bases_onb_residual():
    good = SiteBases(
        xi_plus=[1, 0], xi_minus=[0, 1], zeta_minus=[INV_SQRT2, INV_SQRT2],
        zeta_plus=[INV_SQRT2, -INV_SQRT2],
    )
    assert good.onb_residual() < 1e-15
    skewed = SiteBases(
        xi_plus=[1, 0], xi_minus=[1, 1], zeta_minus=[1, 0], zeta_plus=[0, 1]
    )
    assert skewed.onb_residual() > 0.9
    assert good.close_to(good)
    assert not good.close_to(skewed, tol=1e-6)


# ---------------------------------------------------------------------------
# validation


def test_validate_accepts_all_typed_classes_and_general():
    for k in (1, 2, 3, 4):
        rep = validate(random_walk(5 + k, (-3, 3), k=k))
        assert rep.ok, rep.lines()
        assert rep.max_residual < 1e-12
    rep = validate(random_general_walk(9, (0, 4)))
    assert rep.ok
    assert rep.max_residual < 1e-12


def test_validate_flags_nonunitary_class1_coin():
    coin = Coin2.from_matrix(np.array([[1.0, 0.2], [0.0, 1.0]]))
    w = WalkSpec.typed(1, {0: coin}, Window(0, 0), WindowOnly())
    rep = validate(w)
    assert not rep.ok
    assert rep.max_residual > 0.1


def test_validate_class2_needs_cross_site_orthogonality():
    """Sitewise-unitary coins are not enough in class 2.

    The identity coin everywhere except a Hadamard coin at site 0 makes
    the two columns that meet at site 1 non-orthogonal, so the walk
    operator is not unitary despite every coin being unitary.
    """
    eye = Coin2.from_matrix(np.eye(2))
    coins = {n: eye for n in range(-2, 3)}
    coins[0] = _hadamard_coin()
    w = WalkSpec.typed(2, coins, Window(-2, 2), ConstantTails())
    rep = validate(w)
    assert not rep.ok
    bad = {s.site: s.cross_residual for s in rep.sites}
    assert bad[1] == pytest.approx(INV_SQRT2, abs=1e-12)
    assert bad[-1] == pytest.approx(INV_SQRT2, abs=1e-12)


def test_validate_class2_tail_conditions():
    """Clamped tails repeat the edge coin, adding conditions past the window."""
    w = random_walk(8, (-3, 3), k=2)  # wired for a window-only walk
    rewrap = WalkSpec.typed(2, w.coins, w.window, ConstantTails())
    rep = validate(rewrap)
    assert not rep.ok
    assert any("tail coin" in m for s in rep.sites for m in s.messages)
    good = random_walk(8, (-3, 3), k=2, extension=ConstantTails())
    assert validate(good).ok


def test_validate_class2_random_is_unitary_walk():
    w = random_walk(17, (-3, 3), k=2, extension=Periodic(7))
    rep = validate(w)
    assert rep.ok, rep.lines()
    M = unitary_on_window(w)
    assert np.abs(M.conj().T @ M - np.eye(M.shape[0])).max() < 1e-12


def test_validate_periodic_consistency():
    c1, c2 = random_walk(1, (0, 0), k=1).coins[0], random_walk(2, (0, 0), k=1).coins[0]
    w = WalkSpec.typed(1, {0: c1, 1: c2}, Window(0, 1), Periodic(1))
    rep = validate(w)
    assert not rep.ok
    assert any("period" in m for m in rep.messages)
    assert any("NOT OK" in line for line in rep.lines())


# ---------------------------------------------------------------------------
# dense walk operator


def test_unitary_on_window_hadamard():
    M = unitary_on_window(hadamard((0, 7)))
    assert np.abs(M.conj().T @ M - np.eye(16)).max() < 1e-12
    # two nonzero blocks per column of sites, each rank 1
    assert np.count_nonzero(np.abs(M) > 1e-14) == 4 * 8


def test_unitary_on_window_rejects_nonperiodic():
    with pytest.raises(UnsupportedBoundary):
        unitary_on_window(random_walk(0, (0, 3), k=1))


def test_unitary_on_window_commutes_with_period_shift():
    """With period p, the ring operator commutes with the p-site cyclic shift."""
    w = random_walk(23, (0, 5), k=1, extension=Periodic(2))
    M = unitary_on_window(w)
    L = 6
    P = np.zeros((2 * L, 2 * L))
    for j in range(L):
        jj = (j + 2) % L
        P[2 * jj, 2 * j] = P[2 * jj + 1, 2 * j + 1] = 1.0
    assert np.abs(P @ M - M @ P).max() < 1e-12


def test_unitary_on_window_general_form():
    g = random_general_walk(13, (0, 4))
    M = unitary_on_window(g)
    assert np.abs(M.conj().T @ M - np.eye(10)).max() < 1e-12


def test_unitary_on_window_all_classes_unitary():
    for k in (1, 2, 3, 4):
        w = random_walk(31 + k, (0, 5), k=k, extension=Periodic(6))
        M = unitary_on_window(w)
        assert np.abs(M.conj().T @ M - np.eye(12)).max() < 1e-12, f"class {k}"
