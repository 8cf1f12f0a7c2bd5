"""Simulate the standard coined walk and print its spreading profile.

The walker starts at the origin in the first coin state.  After t steps
the support lies in [-t, t] with the familiar two-horned distribution;
the evolution is matrix-free and exactly norm-preserving.
"""

from qwalk1d import State, distribution, step
from qwalk1d.models import hadamard

walk = hadamard()  # one coin, repeated over the whole line

for t in (2, 4, 8):
    probs = distribution(walk, State.at_site(0, 1.0, 0.0), t)
    print(f"t = {t}")
    for n in sorted(probs):
        bar = "#" * round(60 * probs[n])
        print(f"  {n:+3d}  {probs[n]:8.5f}  {bar}")
    print(f"  total = {sum(probs.values()):.15f}")
    print()

# the two-step distribution is exactly {-2: 1/4, 0: 1/2, +2: 1/4}
probs = distribution(walk, State.at_site(0, 1.0, 0.0), 2)
assert abs(probs[-2] - 0.25) < 1e-12
assert abs(probs[0] - 0.50) < 1e-12
assert abs(probs[2] - 0.25) < 1e-12
print("two-step probabilities match the closed form to 1e-12")

# norm drift stays at rounding level even over a thousand steps
psi = State.at_site(0, 1.0, 1.0j)
for _ in range(1000):
    psi = step(walk, psi)
print(f"norm after 1000 steps: {psi.norm():.15f}")
print(f"support spans [{min(psi.support)}, {max(psi.support)}]")
