"""Put one walk into each of its four canonical shapes.

A nearest-neighbour walk given by raw orthonormal frames can be
conjugated, site by site, into a typed form where the hopping blocks
carry a fixed zero pattern.  There are four such shapes; this script
drives one random walk through all of them and checks the books.
"""

import numpy as np

from qwalk1d import (
    SiteUnitaryFamily,
    Window,
    factor_shift_coin,
    general_to_type,
    unitary_on_window,
    validate,
)
from qwalk1d.models import random_general_walk

WINDOW = (0, 5)
SITES = range(WINDOW[0], WINDOW[1] + 1)
DIM = 2 * len(list(SITES))


def sparsity(m, tol=1e-12):
    """Render a matrix as a dot-and-X sparsity chart."""
    rows = []
    for r in np.abs(m) > tol:
        rows.append(" ".join("X" if x else "." for x in r))
    return "\n".join(rows)


def site_unitaries(fam, ext):
    w = np.zeros((DIM, DIM), dtype=complex)
    for j, n in enumerate(SITES):
        w[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = fam.at(n, ext)
    return w


walk = random_general_walk(7, WINDOW)
validate(walk)
m_general = unitary_on_window(walk)

frame = walk.bases[2]
print("general form at site 2 (orthonormal frame, rows = vectors):")
for name in ("xi_plus", "xi_minus", "zeta_minus", "zeta_plus"):
    v = getattr(frame, name)
    print(f"  {name:<10} [{v[0]: .4f}, {v[1]: .4f}]")

print("\nwalk unitary on the window (ring closure), nonzero entries:")
print(sparsity(m_general))

for k in (1, 2, 3, 4):
    typed, fam = general_to_type(walk, k)
    validate(typed)
    w = site_unitaries(fam, walk.extension)
    conj_gap = np.abs(w @ m_general @ w.conj().T - unitary_on_window(typed)).max()
    coin = typed.coin_at(2).matrix()
    print(f"\nshape {k}:")
    print("  coin at site 2:")
    for row in coin:
        print(f"    [{row[0]: .4f}, {row[1]: .4f}]")
    print(f"  conjugation residual |W U W* - U_{k}| = {conj_gap:.3e}")
    print("  typed unitary nonzero entries:")
    print("  " + sparsity(unitary_on_window(typed)).replace("\n", "\n  "))

# the typed walk factors into an involutive shift times a block-diagonal
# coin; the shift encodes where amplitude hops, the coin how it mixes
typed, _ = general_to_type(walk, 1)
fac = factor_shift_coin(typed)
s, t = fac.shift_matrix(), fac.coin_matrix()
m = unitary_on_window(typed)
print("\nshift/coin factorization of shape 1:")
print(f"  |S - S*|      = {np.abs(s - s.conj().T).max():.3e}")
print(f"  |S^2 - I|     = {np.abs(s @ s - np.eye(DIM)).max():.3e}")
print(f"  |S T - U|     = {np.abs(s @ t - m).max():.3e}")

# sanity: a conjugating family must be unitary site by site
fam = SiteUnitaryFamily.identity(Window(*WINDOW))
print(f"  identity family unitarity residual = {fam.max_unitarity_residual():.3e}")
