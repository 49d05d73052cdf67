"""Hurwitz zeta function at s = 2 for complex argument.

Direct summation of the leading terms followed by an Euler-Maclaurin
tail, accurate to about 1e-15 relative for any ``Re(q) > 0``.
"""

import math

# B_2, B_4, ..., B_12
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)

#: the tail starts once |q + M| reaches this radius
TAIL_RADIUS = 20.0


def _shift_count(q: complex) -> int:
    """Smallest M >= 0 with |q + M| >= TAIL_RADIUS."""
    if abs(q) >= TAIL_RADIUS:
        return 0
    reach = math.sqrt(max(TAIL_RADIUS**2 - q.imag**2, 0.0))
    m = max(0, math.ceil(reach - q.real))
    while abs(q + m) < TAIL_RADIUS:
        m += 1
    return m


def hurwitz_zeta2(q: complex) -> complex:
    """Return sum_{m>=0} (q + m)**-2.

    Raises
    ------
    ValueError
        If ``Re(q) <= 0``.
    """
    q = complex(q)
    if not q.real > 0.0:
        raise ValueError(f"hurwitz_zeta2 requires Re(q) > 0, got {q!r}")
    m = _shift_count(q)
    # smallest terms last is irrelevant here: at most ~20 terms, all O(1/|q|^2)
    head = sum(1.0 / (q + k) ** 2 for k in range(m))
    n = q + m
    inv = 1.0 / n
    inv2 = inv * inv
    tail = inv + 0.5 * inv2
    power = inv2 * inv
    for b in _BERNOULLI:
        tail += b * power
        power *= inv2
    return head + tail
