import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridopt.expr import (Const, ModelError, Problem, Var, eval_natural, eval_point,
                            eval_real, eval_taylor, exp, format_expr, format_problem,
                            grad_interval, log, parse_constant, parse_problem, sin, sqr, sqrt)
from hybridopt.interval import Box, Interval
from oracles import random_box, random_expr, sample_point

x, y = Var(0, "x"), Var(1, "y")

BANANA = """
var x in [0, 10];
var y in [0, 10];
minimize -sqr(x + y - 10)/30 - sqr(x - y + 10)/120;
subject to 20/sqr(x) - y <= 0;
subject to sqr(x) + 8*y - 75 <= 0;
"""


def within_ulp(a: float, b: float) -> bool:
    return a == b or math.nextafter(a, b) == b


# -- evaluation -------------------------------------------------------------

def test_eval_real_examples():
    f = sqr(x) - x
    assert eval_real(f, [-1.0]) == 2.0
    assert eval_real(f, [0.0]) == 0.0
    assert eval_real(20 / sqr(x) - y, [2.0, 5.0]) == 0.0


def test_eval_real_domain_errors_give_nan():
    assert math.isnan(eval_real(sqrt(x), [-1.0]))
    assert math.isnan(eval_real(log(x), [0.0]))
    assert math.isnan(eval_real(1 / x, [0.0]))


def test_natural_extension_example():
    r = eval_natural(sqr(x) - x, Box([(-2, 0.5)]))
    assert within_ulp(r.lo, -0.5) and within_ulp(r.hi, 6.0)
    assert r.lo <= -0.5 and r.hi >= 6.0


def test_taylor_extension_example():
    r = eval_taylor(sqr(x) - x, Box([(-2, 0.5)]), [-1.0])
    assert within_ulp(r.lo, -5.5) and within_ulp(r.hi, 7.0)
    assert r.lo <= -5.5 and r.hi >= 7.0


def test_no_symbolic_cancellation():
    assert eval_natural(x - x, Box([(-5, 5)])) == Interval(-10, 10)


def test_constant_tree():
    assert eval_natural(Const(2.5), Box([(0, 1)])) == Interval(2.5, 2.5)


def test_gradient_examples():
    assert grad_interval(sqr(x) - x, Box([(-2, 0.5)])) == [Interval(-5, 0)]
    assert grad_interval(Const(3.0) + 0 * x, Box([(0, 1)]))[0].contains(0.0)
    assert grad_interval(Const(3.0), Box([(0, 1), (0, 2)])) == [Interval(0, 0)] * 2
    assert grad_interval(x * y, Box([(1, 2), (3, 4)]))[0] == Interval(3, 4)


def test_taylor_degenerate_box_equals_point_value():
    e = exp(x) * sin(y) + sqr(x)
    c = [0.3, 1.1]
    assert eval_taylor(e, Box.from_point(c), c) == eval_point(e, c)


def test_taylor_linear_map():
    r = eval_taylor(3 * x, Box([(0, 1)]), [0.5])
    assert r.lo <= 0 and r.hi >= 3
    assert r.lo > -1e-12 and r.hi < 3 + 1e-12


def test_taylor_center_outside_box_rejected():
    with pytest.raises(ValueError):
        eval_taylor(sqr(x), Box([(0, 1)]), [2.0])


def test_sqrt_derivative_at_zero_is_unbounded_not_error():
    g = grad_interval(sqrt(x), Box([(0, 1)]))
    assert g[0].hi == math.inf


def test_range_soundness_fuzz_10k():
    rng = random.Random(99)
    misses = 0
    cases = 0
    while cases < 10_000:
        e = random_expr(rng, 2, depth=3)
        b = random_box(rng, 2)
        nat = eval_natural(e, b)
        tay = eval_taylor(e, b)
        for _ in range(5):
            p = sample_point(rng, b)
            v = eval_real(e, p)
            cases += 1
            if math.isnan(v) or math.isinf(v):
                continue
            if not (nat.contains(v) and tay.contains(v)):
                misses += 1
    assert misses == 0


def test_gradient_contains_finite_difference():
    rng = random.Random(3)
    checked = 0
    for _ in range(400):
        e = random_expr(rng, 2, depth=3)
        p = [rng.uniform(-2, 2), rng.uniform(-2, 2)]
        g = grad_interval(e, Box.from_point(p))
        for i in range(2):
            h = 1e-6
            a, b = list(p), list(p)
            a[i] += h
            b[i] -= h
            fa, fb = eval_real(e, a), eval_real(e, b)
            if not (math.isfinite(fa) and math.isfinite(fb)):
                continue
            fd = (fa - fb) / (2 * h)
            tol = max(1e-6, 1e-6 * abs(fd)) + 1e-4 * max(1.0, abs(fd))
            assert g[i].lo - tol <= fd <= g[i].hi + tol
            checked += 1
    assert checked > 500


# -- parsing ----------------------------------------------------------------

def test_parse_banana():
    p = parse_problem(BANANA)
    assert p.n == 2 and p.m == 2 and p.p == 0
    assert p.domain == Box([(0, 10), (0, 10)])
    assert p.names == ("x", "y")


def test_parse_unconstrained():
    p = parse_problem("var x1 in [0, 1]; minimize x1;")
    assert p.m == 0 and p.p == 0 and p.n == 1


def test_equalities_become_two_inequalities():
    p = parse_problem("var x in [0, 2]; minimize x; subject to sqr(x) - 2 = 0;", eps_eq=1e-8)
    assert p.p == 1
    g1, g2 = p.constraints
    v = 1.5
    h = v * v - 2
    assert eval_real(g1, [v]) == pytest.approx(h - 1e-8)
    assert eval_real(g2, [v]) == pytest.approx(-h - 1e-8)


def test_relations_normalised():
    p = parse_problem("var x in [0, 2]; minimize x; subject to x >= 1; subject to x <= 1.5;")
    assert eval_real(p.inequalities[0], [2.0]) == -1.0
    assert eval_real(p.inequalities[1], [2.0]) == 0.5


def test_comments_and_whitespace():
    p = parse_problem("# header\nvar   x in [ -1 ,1 ] ;# trailing\n minimize\n sqr(x) ;")
    assert p.n == 1


def test_scientific_literals_and_powers():
    p = parse_problem("var x in [-1e1, 2.5E+0]; minimize x^3 - 1e-3*x^-2 + x^2;")
    assert p.domain[0] == Interval(-10, 2.5)
    assert eval_real(p.objective, [1.0]) == pytest.approx(1 - 1e-3 + 1)


@pytest.mark.parametrize("text,line,col", [
    ("var x in [0, 1];\nminimize foo(x);", 2, 10),
    ("var x in [0, 1];\nminimize z;", 2, 10),
    ("var x in [0, 1];\nminimize sqr(x, x);", 2, 15),
    ("var x in [2, 1];\nminimize x;", 1, 15),
    ("var x in [0, 1];\nminimize x^0.5;", 2, 12),
    ("var x in [0, 1];\nminimize x", 2, 11),
])
def test_parse_errors_report_position(text, line, col):
    with pytest.raises(ModelError) as err:
        parse_problem(text)
    assert (err.value.line, err.value.col) == (line, col)


def test_missing_objective():
    with pytest.raises(ModelError):
        parse_problem("var x in [0, 1];")


def test_inexact_constant_is_widened():
    c = parse_constant("0.1")
    assert c.value == 0.1
    assert c.enclosure.lo < 0.1 < c.enclosure.hi
    assert parse_constant("0.5").enclosure == Interval(0.5, 0.5)


def test_round_trip_banana():
    p = parse_problem(BANANA)
    assert parse_problem(format_problem(p)) == p


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10_000))
def test_round_trip_random(seed):
    rng = random.Random(seed)
    f = random_expr(rng, 2, depth=3)
    g = random_expr(rng, 2, depth=2)
    p = Problem(("x", "y"), Box([(-1, 1), (-2, 3)]), f, (g,))
    text = format_problem(p)
    q = parse_problem(text)
    assert format_problem(q) == text
    assert parse_problem(format_problem(q)) == q
    pt = [0.3, -0.7]
    for a, b in [(p.objective, q.objective), (p.inequalities[0], q.inequalities[0])]:
        va, vb = eval_real(a, pt), eval_real(b, pt)
        assert (math.isnan(va) and math.isnan(vb)) or va == pytest.approx(vb, rel=1e-12, abs=1e-12)


def test_problem_validation():
    with pytest.raises(ValueError):
        Problem(("x",), Box([(0, 1)]), Var(3))
    with pytest.raises(ValueError):
        Problem(("x", "y"), Box([(0, 1)]), Var(0))


def test_format_expr_parenthesises():
    e = (x - (y - 1)) / (x * 2)
    assert format_expr(e).count("(") >= 2
    p = Problem(("x", "y"), Box([(0, 1), (0, 1)]), e)
    q = parse_problem(format_problem(p))
    assert eval_real(q.objective, [0.5, 0.25]) == eval_real(e, [0.5, 0.25])
