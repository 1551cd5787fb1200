"""Re-derives the frozen reference values in ``oracles.py``."""

import math

import mpmath

from hybridopt.contractor import constraint_system, hc4
from hybridopt.cli import load_model_text
from hybridopt.expr import parse_problem
import oracles as orc


def test_banana_closed_form():
    x, y, f = orc.banana_exact()
    # frozen at 15 significant digits
    assert math.isclose(float(x), orc.BANANA_X, rel_tol=1e-14)
    assert math.isclose(float(y), orc.BANANA_Y, rel_tol=1e-14)
    assert math.isclose(float(f), orc.BANANA_FSTAR, rel_tol=1e-14)
    with mpmath.workdps(50):
        # both constraints hold with equality
        assert abs(20 / x ** 2 - y) < mpmath.mpf(10) ** -40
        assert abs(x ** 2 + 8 * y - 75) < mpmath.mpf(10) ** -40


def test_banana_reference_value_is_slightly_above_optimum():
    gap = orc.BANANA_REPORTED_F - orc.BANANA_FSTAR
    assert 0 < gap < 1e-8


def test_banana_contracted_domain_one_sweep():
    # first constraint on [0, 10]^2: y >= 20/10^2 and x^2 >= 20/10;
    # second constraint then gives x^2 <= 75 - 8*0.2 and 8*y <= 75 - 2
    expected = ((math.sqrt(2.0), math.sqrt(75 - 8 * 0.2)), (0.2, (75 - 2) / 8))
    for (a, b), (c, d) in zip(expected, orc.BANANA_CONTRACTED):
        assert abs(a - c) <= 1e-3 and abs(b - d) <= 1e-3
    p = parse_problem(load_model_text("banana"))
    box = hc4(constraint_system(p), p.domain)
    for comp, (a, b) in zip(box, expected):
        assert comp.lo <= a <= comp.lo + 1e-12
        assert comp.hi - 1e-12 <= b <= comp.hi


def test_camel_boundary_minimum():
    x, f = orc.camel_boundary_mp()
    assert abs(float(x) - orc.CAMEL_X[0]) <= 1e-12
    assert abs(float(f) - orc.CAMEL_FSTAR) <= 1e-14


def test_camel_grid_and_refinement():
    f, (x, y) = orc.camel_oracle()
    assert abs(f - orc.CAMEL_FSTAR) <= 1e-9
    assert abs(abs(y) - 0.9) <= 1e-9
    assert abs(abs(x) - abs(orc.CAMEL_X[0])) <= 1e-6


def test_camel_mirror_symmetry():
    x, y = orc.CAMEL_X
    assert orc.camel_f(x, y) == orc.camel_f(-x, -y)


def test_quartic_root():
    assert (orc.QUARTIC_X ** 2 - 2) ** 2 < 1e-30
