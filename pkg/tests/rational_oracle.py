"""Exact rational brute force over individual lives, used as a test oracle.

Deliberately shares no code with the package: every alive/dead pattern is
walked with Fraction arithmetic and settled from the MEA definition.
"""

from fractions import Fraction
from itertools import product


def bob_expectations(groups, target=1):
    """Return (E[c0 + c1], E[c0 + c1 | alive]) for the first member of ``target``.

    ``groups`` is a sequence of (size, p, wealth) with Fraction-compatible values.
    """
    groups = [(n, Fraction(p), Fraction(w)) for n, p, w in groups]
    lives = [g for g, (n, _, _) in enumerate(groups) for _ in range(n)]
    bob = lives.index(target)
    _, pb, wb = groups[target]
    c0 = wb / (1 + pb)
    after = [w * p / (1 + p) for _, p, w in groups]
    budget = sum(n * a for (n, _, _), a in zip(groups, after))
    total = Fraction(0)
    alive_total = Fraction(0)
    for pattern in product((False, True), repeat=len(lives)):
        prob = Fraction(1)
        for alive, g in zip(pattern, lives):
            p = groups[g][1]
            prob *= p if alive else 1 - p
        expected_basis = sum(after[g] / groups[g][1] for alive, g in zip(pattern, lives) if alive)
        if pattern[bob]:
            pay = c0 + budget / expected_basis * c0
            alive_total += prob * pay
        elif expected_basis == 0:
            pay = c0 + after[target]
        else:
            pay = c0
        total += prob * pay
    return total, alive_total / pb
