"""The stock walk families: exact phases, structure, and randomness."""

import math
from fractions import Fraction

import numpy as np
import pytest

from qwalk1d.angles import PI, ZERO, Angle, residual_mod
from qwalk1d.model import (
    ConstantTails,
    NotUnitary,
    Periodic,
    WindowOnly,
    polar_form,
    unitary_on_window,
    validate,
)
from qwalk1d.models import (
    hadamard,
    kitagawa_a,
    kitagawa_b,
    random_general_walk,
    random_walk,
    shikano_katsura,
    two_coin,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


# ---------------------------------------------------------------------------
# fixed families


def test_hadamard_is_one_periodic_and_valid():
    w = hadamard(window=(-2, 2))
    assert isinstance(w.extension, Periodic) and w.extension.p == 1
    assert validate(w).ok
    m = w.coin_at(0).matrix()
    assert np.allclose(m, np.array([[1, 1], [1, -1]]) * INV_SQRT2, atol=0)


def test_hadamard_polar_is_exact():
    pol = polar_form(hadamard().coin_at(0))
    assert pol.s == pol.r == INV_SQRT2
    assert pol.sigma.frac == 0 and pol.nu.frac == 0 and pol.mu.frac == 0
    assert pol.tau.frac == 1 and pol.delta.frac == 1


def test_kitagawa_a_polar_phases():
    w = kitagawa_a({n: Angle.from_pi(n + 3, 9) for n in range(-2, 3)}, (-2, 2))
    assert validate(w).ok
    for n in range(-2, 3):
        pol = polar_form(w.coin_at(n))
        assert pol.s == pol.r == INV_SQRT2
        assert pol.mu.frac == 0 and pol.nu.frac == 0
        assert pol.sigma.frac == Fraction(n + 3, 9) % 2
        assert pol.delta.frac == 1  # sigma + tau is exactly pi


def test_kitagawa_b_polar_phases():
    omega = {n: Angle.from_pi(2 * n + 1, 7) for n in range(0, 4)}
    w = kitagawa_b(omega, (0, 3))
    assert validate(w).ok
    for n in range(0, 4):
        pol = polar_form(w.coin_at(n))
        assert pol.sigma.frac == 0 and pol.tau.frac == 0
        assert pol.delta.frac == 0
        assert residual_mod(pol.nu, omega[n], 2 * PI) == 0.0
        assert residual_mod(pol.mu, PI - omega[n], 2 * PI) == 0.0


def test_kitagawa_accepts_float_omega():
    w = kitagawa_b({0: 0.7, 1: -0.7}, (0, 1))
    assert validate(w).ok
    assert abs(polar_form(w.coin_at(0)).nu.radians - 0.7) < 1e-15


def test_shikano_katsura_rotation_entries():
    w = shikano_katsura(Fraction(1, 8), (0, 8))
    assert validate(w).ok
    for n in range(0, 9):
        x = 2.0 * math.pi * n / 8.0
        m = w.coin_at(n).matrix()
        assert np.allclose(
            m, [[math.cos(x), -math.sin(x)], [math.sin(x), math.cos(x)]], atol=1e-15
        )


def test_shikano_katsura_exact_zeros_at_rational_points():
    # 2*alpha*n an integer makes the off-diagonal exactly zero
    w = shikano_katsura(Fraction(1, 2), (0, 4))
    for n in range(0, 5):
        coin = w.coin_at(n)
        assert coin.b.mag == 0.0 and coin.c.mag == 0.0
        assert coin.a.mag == 1.0
    # odd multiples of a quarter turn zero the diagonal instead
    w = shikano_katsura(Fraction(1, 4), (0, 3))
    for n in (1, 3):
        coin = w.coin_at(n)
        assert coin.a.mag == 0.0 and coin.d.mag == 0.0
        assert coin.b.mag == 1.0 and coin.c.mag == 1.0


def test_shikano_katsura_real_phases_are_axis_exact():
    w = shikano_katsura(Fraction(5, 12), (-6, 6))
    for n in range(-6, 7):
        for amp in (w.coin_at(n).a, w.coin_at(n).b, w.coin_at(n).c, w.coin_at(n).d):
            assert amp.arg.frac in (0, 1)


def test_shikano_katsura_float_alpha_close_to_rational():
    exact = shikano_katsura(Fraction(1, 3), (0, 5))
    approx = shikano_katsura(1.0 / 3.0, (0, 5))
    for n in range(0, 6):
        assert np.allclose(
            exact.coin_at(n).matrix(), approx.coin_at(n).matrix(), atol=1e-12
        )


def test_two_coin_builds_constant_tails_split():
    s = math.sqrt(1.0 - 0.36)
    w = two_coin(
        complex(s), 0.2, 0.5, s * np.exp(1j * (0.5 + 0.2 + math.pi)), 0.6,
        complex(s), 1.2, 0.5, s * np.exp(1j * (0.5 + 1.2 + math.pi)), 0.6,
        window=(-3, 3),
    )
    assert isinstance(w.extension, ConstantTails)
    assert validate(w).ok
    assert np.allclose(w.coin_at(0).matrix(), w.coin_at(3).matrix(), atol=0)
    assert np.allclose(w.coin_at(-1).matrix(), w.coin_at(-3).matrix(), atol=0)
    assert not np.allclose(w.coin_at(-1).matrix(), w.coin_at(0).matrix(), atol=1e-3)
    # the clamps extend the halves past the window
    assert np.allclose(w.coin_at(9).matrix(), w.coin_at(0).matrix(), atol=0)
    assert np.allclose(w.coin_at(-9).matrix(), w.coin_at(-1).matrix(), atol=0)


def test_two_coin_rejects_bad_parameters():
    s = INV_SQRT2
    with pytest.raises(ValueError):
        two_coin(
            complex(s), 0.0, 0.0, -complex(s), s,
            complex(s), 0.0, 0.0, -complex(s), s,
            window=(1, 5),  # split site missing
        )
    with pytest.raises(ValueError):
        two_coin(
            complex(s), 0.0, 0.0, -complex(s), 0.0,  # r = 0
            complex(s), 0.0, 0.0, -complex(s), s,
            window=(-2, 2),
        )
    with pytest.raises(NotUnitary):
        two_coin(
            complex(s), 0.0, 0.0, complex(s), s,  # arg a + arg d off by pi
            complex(s), 0.0, 0.0, -complex(s), s,
            window=(-2, 2),
        )


# ---------------------------------------------------------------------------
# random families


def test_random_walk_deterministic_per_seed():
    a = random_walk(11, (-3, 3), k=2)
    b = random_walk(11, (-3, 3), k=2)
    c = random_walk(12, (-3, 3), k=2)
    for n in range(-3, 4):
        assert np.array_equal(a.coin_at(n).matrix(), b.coin_at(n).matrix())
    assert not np.allclose(a.coin_at(0).matrix(), c.coin_at(0).matrix(), atol=1e-3)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize(
    "ext", [WindowOnly(), ConstantTails(), Periodic(3), Periodic(6)]
)
def test_random_walk_valid_in_every_class(k, ext):
    w = random_walk(5 * k + 1, (0, 5), k=k, extension=ext)
    report = validate(w)
    assert report.ok, report.lines()


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_random_walk_periodic_walk_is_unitary(k):
    w = random_walk(k, (0, 5), k=k, extension=Periodic(6))
    m = unitary_on_window(w)
    assert np.linalg.norm(m.conj().T @ m - np.eye(12)) < 1e-12


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_random_walk_periodic_coins_tile(k):
    w = random_walk(21 + k, (0, 7), k=k, extension=Periodic(4))
    for n in range(0, 4):
        assert np.array_equal(w.coin_at(n).matrix(), w.coin_at(n + 4).matrix())


def test_random_walk_rejects_bad_class():
    with pytest.raises(ValueError):
        random_walk(0, (0, 3), k=5)


def test_random_general_walk_frames_are_orthonormal():
    w = random_general_walk(3, (0, 5))
    assert isinstance(w.extension, Periodic) and w.extension.p == 6
    assert validate(w).ok
    for n in range(0, 6):
        assert w.bases_at(n).onb_residual() < 1e-12


def test_random_general_walk_is_unitary_on_ring():
    w = random_general_walk(9, (0, 4))
    m = unitary_on_window(w)
    assert np.linalg.norm(m.conj().T @ m - np.eye(10)) < 1e-12
