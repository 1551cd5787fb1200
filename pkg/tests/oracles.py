"""Reference values computed independently of the solver.

The frozen constants below were produced by the functions in this module
(mpmath at 50 digits, or a dense grid followed by SLSQP refinement) and are
re-derived by ``test_oracles.py``.
"""

from __future__ import annotations

import math
import random

import mpmath

from hybridopt.expr import Var, cos, exp, log, sin, sqr, sqrt

# two-constraint model: both constraints are active at the optimum, so
# y = 20/x^2 and x^2 + 160/x^2 = 75
BANANA_X = 8.53242440436525
BANANA_Y = 0.274716722974037
BANANA_FSTAR = -2.825296157828944
# reference optimum, quoted at the rounded optimizer
BANANA_REPORTED_F = -2.825296148
BANANA_REPORTED_X = (8.532424, 0.274717)
BANANA_CONTRACTED = ((1.4142, 8.5674), (0.2, 9.125))

# six-hump camel with |y| >= 0.9
CAMEL_FSTAR = -0.666569960740254
CAMEL_X = (-0.114052965759046, 0.9)

SPHERE_FSTAR = 0.0
QUARTIC_FSTAR = 0.0
QUARTIC_X = math.sqrt(2.0)

# best DE objective on the sphere model after 200 generations, NP=20, seed=7
SPHERE_DE_SEED = 7
SPHERE_DE_200 = 1.0658527513232143e-35


def banana_exact(dps: int = 50):
    with mpmath.workdps(dps):
        x2 = (75 + mpmath.sqrt(75 ** 2 - 640)) / 2
        x = mpmath.sqrt(x2)
        y = 20 / x2
        f = -(x + y - 10) ** 2 / 30 - (x - y + 10) ** 2 / 120
        return x, y, f


def camel_f(x, y):
    return (4 - 2.1 * x ** 2 + x ** 4 / 3) * x ** 2 + x * y + (-4 + 4 * y ** 2) * y ** 2


def camel_oracle():
    """Grid search on the feasible set, then SLSQP from the best grid points."""
    import numpy as np
    from scipy.optimize import minimize

    xs = np.linspace(-3, 3, 601)
    ys = np.linspace(-2, 2, 401)
    X, Y = np.meshgrid(xs, ys)
    F = camel_f(X, Y)
    F[Y ** 2 < 0.81] = np.inf
    best = None
    for k in np.argsort(F.ravel())[:40]:
        z0 = (X.ravel()[k], Y.ravel()[k])
        r = minimize(lambda z: camel_f(*z), z0, method="SLSQP",
                     constraints=[{"type": "ineq", "fun": lambda z: z[1] ** 2 - 0.81}],
                     bounds=[(-3, 3), (-2, 2)], options={"ftol": 1e-15, "maxiter": 500})
        if r.success and r.x[1] ** 2 >= 0.81 - 1e-12 and (best is None or r.fun < best.fun):
            best = r
    return float(best.fun), tuple(best.x)


def camel_boundary_mp():
    """Minimum along y = +0.9 by solving d/dx f(x, 0.9) = 0 in high precision."""
    with mpmath.workdps(40):
        y = mpmath.mpf(9) / 10
        f = lambda x: camel_f(x, y)
        x = mpmath.findroot(lambda x: mpmath.diff(f, x), -0.114)
        return x, f(x)


# -- random expressions -----------------------------------------------------

_UNARY_SAFE = ("neg", "sqr", "exp", "sin", "cos", "pow3")


def random_expr(rng: random.Random, nvars: int, depth: int = 3):
    """A random expression over ``nvars`` variables.

    sqrt and log are applied to ``sqr(e) + c`` with ``c > 0`` so that they are
    defined everywhere; division uses a positive denominator of the same form.
    """
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.7:
            return Var(rng.randrange(nvars))
        return rng.choice([0.5, 2.0, -1.5, 3.0, 0.1]) * Var(rng.randrange(nvars)) + rng.uniform(-2, 2)
    r = rng.random()
    sub = lambda: random_expr(rng, nvars, depth - 1)
    if r < 0.45:
        a, b = sub(), sub()
        op = rng.choice(["add", "sub", "mul", "div"])
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        return a / (sqr(b) + rng.uniform(0.5, 2.0))
    u = rng.choice(_UNARY_SAFE + ("sqrt", "log"))
    a = sub()
    if u == "neg":
        return -a
    if u == "sqr":
        return sqr(a)
    if u == "pow3":
        return a ** 3
    if u == "exp":
        return exp(a / (sqr(a) + 1.0))
    if u == "sin":
        return sin(a)
    if u == "cos":
        return cos(a)
    if u == "sqrt":
        return sqrt(sqr(a) + rng.uniform(0.1, 1.0))
    return log(sqr(a) + rng.uniform(0.1, 1.0))


def random_box(rng: random.Random, n: int, scale: float = 3.0):
    from hybridopt.interval import Box

    comps = []
    for _ in range(n):
        a = rng.uniform(-scale, scale)
        w = rng.choice([0.0, 1e-6, 0.01, 0.5, rng.uniform(0, 2 * scale)])
        comps.append((a, a + w))
    return Box(comps)


def sample_point(rng: random.Random, box):
    return [rng.uniform(c.lo, c.hi) if c.lo < c.hi else c.lo for c in box]
