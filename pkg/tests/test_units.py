import numpy as np

from tripletrade import (ED, SD, TP, octant_bound_check, unit_coefficients, unit_region)


def test_unit_vectors_exact():
    assert np.array_equal(TP, [-2, 1, -1])
    assert np.array_equal(SD, [2, -1, -1])
    assert np.array_equal(ED, [0, -1, 1])


def test_unit_region_contains_origin_and_waste():
    reg = unit_region()
    assert reg.contains([0, 0, 0])
    assert reg.contains([-2, 0, 0])          # TP + ED: cbits wasted
    assert not reg.contains([0, 0, 1])


def test_unit_coefficients_examples():
    c = unit_coefficients(TP)
    assert np.allclose(c.as_array(), [1, 0, 0]) and c.feasible
    c = unit_coefficients([0, 0, 0])
    assert np.allclose(c.as_array(), [0, 0, 0]) and c.feasible
    c = unit_coefficients([0, 0, -2])
    assert np.allclose(c.as_array(), [1, 1, 0]) and c.feasible
    assert not unit_coefficients([0, 0, 1]).feasible


def test_unit_coefficients_reconstruct():
    rng = np.random.default_rng(61)
    gens = np.array([TP, SD, ED])
    for _ in range(100):
        w = rng.uniform(0, 2, 3)
        x = w @ gens
        c = unit_coefficients(x)
        assert c.feasible
        assert np.max(np.abs(c.as_array() - w)) < 1e-9


def test_octant_examples():
    assert octant_bound_check([1, -1, 0]).passed          # boundary of (+,-,-)/(+,-,+)
    assert not octant_bound_check([0.5, 0.5, 0.5]).passed
    assert octant_bound_check([0, 0, 0]).passed
    assert octant_bound_check([-1, -1, -1]).passed        # (-,-,-) is inside


def test_three_way_agreement_sampled():
    rng = np.random.default_rng(67)
    reg = unit_region()
    disagreements = 0
    for _ in range(2000):
        x = rng.uniform(-3, 3, 3)
        lp = reg.contains(x, tol=1e-8)
        co = unit_coefficients(x, tol=1e-8).feasible
        oc = octant_bound_check(x, tol=1e-8).passed
        if not (lp == co == oc):
            disagreements += 1
    assert disagreements == 0


def test_cone_scaling():
    rng = np.random.default_rng(71)
    reg = unit_region()
    for _ in range(50):
        w = rng.uniform(0, 1, 3)
        x = w @ np.array([TP, SD, ED])
        for t in (0.0, 0.5, 2.0, 7.5):
            assert reg.contains(t * x)
