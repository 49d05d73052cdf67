import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dephase.zeta import hurwitz_zeta2

from oracles import hurwitz2


@pytest.mark.parametrize("q, expected", [
    (1.0, math.pi**2 / 6),
    (0.5, math.pi**2 / 2),
    (2.0, math.pi**2 / 6 - 1),
])
def test_closed_form_values(q, expected):
    assert hurwitz_zeta2(q) == pytest.approx(expected, rel=1e-13, abs=0)
    assert hurwitz_zeta2(q).imag == 0


@pytest.mark.parametrize("q", [0.0, -1.0, -0.5 + 3j, 1j])
def test_rejects_non_positive_real_part(q):
    with pytest.raises(ValueError):
        hurwitz_zeta2(q)


@pytest.mark.parametrize("q", [0.01, 0.01 + 0.01j, 0.3 - 7j, 1 + 19.9j, 4 + 150j, 55.5, 0.001 + 1e4j])
def test_against_mpmath(q):
    assert abs(hurwitz_zeta2(q) - hurwitz2(q)) <= 1e-13 * abs(hurwitz2(q))


def test_conjugate_symmetry():
    q = 0.37 + 2.5j
    assert hurwitz_zeta2(q.conjugate()) == pytest.approx(hurwitz_zeta2(q).conjugate(), rel=1e-15)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.1, 10), st.floats(-50, 50))
def test_recurrence(re, im):
    q = complex(re, im)
    lhs = hurwitz_zeta2(q)
    rhs = hurwitz_zeta2(q + 1) + q**-2
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_large_imaginary_argument_decays_like_inverse():
    # zeta(2, q) ~ 1/q + 1/(2 q^2) for |q| large
    q = 3 + 1e6j
    assert np.isclose(hurwitz_zeta2(q), 1 / q + 0.5 / q**2, rtol=1e-12)
