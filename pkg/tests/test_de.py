import math
import random

import pytest

from hybridopt.cli import load_model_text
from hybridopt.contractor import constraint_system, hc4
from hybridopt.coop.messages import DE_TO_IBC, IBC_TO_DE, Channel, Kind
from hybridopt.de import (DEConfig, DEWorker, Individual, better, bounce_back, crossover,
                          draw_offset, evaluate, pick_base_and_partners, rigorous_feasible,
                          rigorous_ub, run_de)
from hybridopt.expr import Problem, Var, eval_real, parse_problem, sqr, sqrt
from hybridopt.interval import Box
import oracles as orc

x = Var(0, "x")


def load(name):
    return parse_problem(load_model_text(name))


def ind(obj, viols, feasible):
    return Individual((0.0,), obj, tuple(viols), feasible)


# -- base selection ---------------------------------------------------------

def test_base_index_modular():
    u, v, w = pick_base_and_partners(5, 4, 2, random.Random(0))
    assert u == 1
    assert len({4, u, v, w}) == 4


def test_base_indices_form_permutation():
    rng = random.Random(1)
    for np_ in (4, 5, 20):
        offset = draw_offset(np_, rng)
        assert 1 <= offset <= np_ - 1
        bases = [pick_base_and_partners(np_, i, offset, rng)[0] for i in range(np_)]
        assert sorted(bases) == list(range(np_))


def test_np4_partners_are_the_rest():
    rng = random.Random(2)
    for _ in range(50):
        u, v, w = pick_base_and_partners(4, 0, 1, rng)
        assert u == 1 and {v, w} == {2, 3}


def test_small_population_rejected():
    with pytest.raises(ValueError):
        pick_base_and_partners(3, 0, 1, random.Random(0))
    with pytest.raises(ValueError):
        DEConfig(np=3)


# -- crossover and bounce-back ---------------------------------------------

def test_crossover_example():
    y = crossover((1, 2), (0, 0), (1, 1), (0, 2), 0.5, 0.9, random.Random(0),
                  R=0, r=(0.95, 0.3))
    assert y == [0.5, -0.5]


def test_crossover_cr_one_mutates_everything():
    rng = random.Random(3)
    u, v, w = (1.0, 2.0, 3.0), (0.5, 0.5, 0.5), (0.0, 1.0, 2.0)
    y = crossover((9, 9, 9), u, v, w, 0.7, 1.0, rng)
    assert y == [ui + 0.7 * (vi - wi) for ui, vi, wi in zip(u, v, w)]


def test_crossover_equal_partners_copy_base():
    y = crossover((9, 9), (1, 2), (3, 3), (3, 3), 0.7, 1.0, random.Random(0))
    assert y == [1, 2]


def test_crossover_always_changes_coordinate_R():
    rng = random.Random(4)
    for _ in range(100):
        y = crossover((9, 9, 9), (0, 0, 0), (1, 1, 1), (0, 0, 0), 0.5, 0.0, rng)
        assert sum(1 for v in y if v != 9) == 1


def test_bounce_back_examples():
    D = Box([(0, 5)])
    assert bounce_back([7.0], [2.0], D, random.Random(0), omega=0.5) == [3.5]
    assert bounce_back([-1.0], [2.0], D, random.Random(0), omega=0.5) == [1.0]
    assert bounce_back([4.0], [2.0], D, random.Random(0)) == [4.0]
    assert bounce_back([7.0], [2.0], D, random.Random(0), omega=0.0) == [2.0]


def test_bounce_back_stays_in_domain():
    rng = random.Random(5)
    D = Box([(-1, 1), (0, 3)])
    for _ in range(1000):
        u = [rng.uniform(-1, 1), rng.uniform(0, 3)]
        yv = [rng.uniform(-10, 10), rng.uniform(-10, 10)]
        assert D.contains(bounce_back(yv, u, D, rng))


# -- selection --------------------------------------------------------------

def test_rule_feasible_equal_objective():
    assert better(ind(1.0, [0, 0], True), ind(1.0, [0, 0], True))
    assert not better(ind(1.0, [0, 0], True), ind(1.5, [0, 0], True))


def test_rule_feasible_beats_infeasible():
    assert better(ind(-5.0, [1, 0], False), ind(10.0, [0, 0], True))
    assert not better(ind(10.0, [0, 0], True), ind(-5.0, [1, 0], False))


def test_rule_componentwise_violation():
    a = ind(0.0, [1.0, 0.5], False)
    assert not better(a, ind(0.0, [0.2, 0.8], False))
    assert better(a, ind(0.0, [1.0, 0.5], False))
    assert better(a, ind(0.0, [0.3, 0.1], False))


def test_nan_objective_is_infeasible():
    p = Problem(("x",), Box([(-1, 1)]), sqrt(x))
    i = evaluate((-0.5,), p, constraint_system(p))
    assert not i.feasible and i.constraint_values[-1] == math.inf
    j = evaluate((0.25,), p, constraint_system(p))
    assert better(i, j)


# -- rigorous evaluation ----------------------------------------------------

def test_rigorous_feasible_examples():
    p = Problem(("x",), Box([(0, 2)]), x, (x - 1,))
    assert rigorous_feasible((1.0,), p)
    assert not rigorous_feasible((1.0 + 2.0 ** -20,), p)


def test_rigorous_feasible_reference_optimizer():
    p = load("banana")
    assert rigorous_feasible(orc.BANANA_REPORTED_X, p)


def test_rigorous_ub_examples():
    p = Problem(("x",), Box([(0, 5)]), sqr(x))
    assert rigorous_ub((3.0,), p) == 9.0
    rng = random.Random(6)
    q = load("banana")
    for _ in range(200):
        pt = (rng.uniform(1, 9), rng.uniform(0, 9))
        assert rigorous_ub(pt, q) >= eval_real(q.objective, pt)


def test_rigorous_ub_at_optimizer():
    p = load("banana")
    pt = (orc.BANANA_X, orc.BANANA_Y)
    assert rigorous_feasible(pt, p)
    v = rigorous_ub(pt, p)
    assert abs(v - orc.BANANA_FSTAR) <= 1e-12
    # the reference figure sits within the 1e-8 certification tolerance of f*
    assert abs(v - orc.BANANA_REPORTED_F) <= 1e-8


def test_rigorous_ub_at_rounded_optimizer():
    # six-digit coordinates cost about 2e-7 in objective value
    v = rigorous_ub(orc.BANANA_REPORTED_X, load("banana"))
    assert abs(v - orc.BANANA_REPORTED_F) <= 1e-6


# -- worker -----------------------------------------------------------------

def test_sphere_reaches_tiny_objective():
    best = run_de(load("sphere"), DEConfig(seed=orc.SPHERE_DE_SEED, max_generations=200))
    assert best.objective <= 1e-6
    assert best.objective == pytest.approx(orc.SPHERE_DE_200, rel=1e-6, abs=1e-40)


def test_population_inside_domain_and_constant_size():
    p = load("banana")
    w = DEWorker(p, DEConfig(seed=3))
    for _ in range(30):
        w.step()
        assert len(w.population) == 20
        assert all(w.domain.contains(i.position) for i in w.population)
        assert sorted(w.last_bases) == list(range(20))


def test_initial_domain_is_contracted():
    p = load("banana")
    w = DEWorker(p, DEConfig(seed=0))
    assert w.domain == hc4(constraint_system(p), p.domain)


def test_injection_becomes_best():
    p = load("banana")
    ch = Channel()
    w = DEWorker(p, DEConfig(seed=1), ch)
    ch.send(IBC_TO_DE, Kind.SOLUTION_FROM_IBC, point=orc.BANANA_REPORTED_X,
            value=rigorous_ub(orc.BANANA_REPORTED_X, p))
    w.step()
    best = w.population[w.best_index()]
    assert best.objective <= eval_real(p.objective, orc.BANANA_REPORTED_X)


def test_injection_never_replaces_best():
    p = load("banana")
    w = DEWorker(p, DEConfig(seed=2))
    for _ in range(5):
        w.step()
    best = w.population[w.best_index()]
    w.inject((5.0, 5.0), math.inf)
    assert best in w.population


def test_sent_bounds_are_rigorous_and_decreasing():
    p = load("banana")
    ch = Channel()
    w = DEWorker(p, DEConfig(seed=4), ch)
    for _ in range(60):
        w.step()
    msgs = ch.receive_all(DE_TO_IBC)
    assert msgs
    vals = [m.value for m in msgs]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    for m in msgs:
        assert rigorous_feasible(m.point, p)
        assert m.value >= orc.BANANA_FSTAR
        assert m.value == rigorous_ub(m.point, p)


def test_restart_keeps_elite_in_domain():
    p = load("banana")
    w = DEWorker(p, DEConfig(seed=5))
    for _ in range(20):
        w.step()
    elite = w.best
    assert elite is not None
    w.restart(w.domain)
    assert elite in w.population
    assert len(w.population) == 20


def test_restart_drops_elite_outside():
    p = load("banana")
    w = DEWorker(p, DEConfig(seed=5))
    for _ in range(20):
        w.step()
    elite = w.best
    far = Box([(1.5, 2.0), (5.0, 9.0)])
    assert not far.contains(elite.position)
    w.restart(far)
    assert elite not in w.population
    assert all(far.contains(i.position) for i in w.population)


def test_strict_restart_regenerates_everything():
    p = load("banana")
    w = DEWorker(p, DEConfig(seed=5, elite_on_restart=False))
    for _ in range(20):
        w.step()
    elite = w.best
    w.restart(w.domain)
    assert elite not in w.population


def test_terminate_stops_worker():
    ch = Channel()
    w = DEWorker(load("sphere"), DEConfig(seed=0), ch)
    ch.send(IBC_TO_DE, Kind.TERMINATE, status="CERTIFIED", value=0.0, lower_bound=0.0)
    assert w.step() is False


def test_same_seed_same_run():
    a = run_de(load("banana"), DEConfig(seed=9, max_generations=40))
    b = run_de(load("banana"), DEConfig(seed=9, max_generations=40))
    assert a.position == b.position


def test_standalone_needs_cap():
    with pytest.raises(ValueError):
        run_de(load("sphere"), DEConfig(seed=0))
