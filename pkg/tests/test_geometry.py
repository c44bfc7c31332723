import numpy as np
import pytest

from tripletrade import (ED, SD, TP, EmptyRegionError, OrthantSpec, RateRegion, clip,
                         contains, extremum, facets_3d, minkowski_sum, region_from_dict,
                         region_to_dict, slide_and_clip, unit_region)
from tripletrade.lp import nonneg_combination, simplex_solve


def random_region(rng, max_points=8, max_rays=4):
    n = int(rng.integers(1, max_points + 1))
    m = int(rng.integers(0, max_rays + 1))
    pts = rng.uniform(-2, 2, size=(n, 3))
    rays = rng.uniform(-1, 1, size=(m, 3))
    rays = rays[np.linalg.norm(rays, axis=1) > 0.2]
    return RateRegion(pts, rays)


# ---------------------------------------------------------------------------
# simplex backend
# ---------------------------------------------------------------------------

def test_simplex_against_scipy():
    from scipy.optimize import linprog

    rng = np.random.default_rng(55)
    for _ in range(200):
        m, n = int(rng.integers(1, 5)), int(rng.integers(2, 9))
        A = rng.uniform(-2, 2, size=(m, n))
        x_feas = rng.uniform(0, 1, size=n)
        b = A @ x_feas                        # feasible by construction
        c = rng.uniform(-1, 1, size=n)
        res = simplex_solve(c, A, b)
        ref = linprog(c, A_eq=A, b_eq=b, bounds=[(0, None)] * n, method="highs")
        if res.status == "unbounded":
            assert ref.status == 3
        else:
            assert res.status == "optimal"
            assert ref.status == 0
            assert abs(res.objective - ref.fun) < 1e-7
            assert np.max(np.abs(A @ res.x - b)) < 1e-8


def test_nonneg_combination_residual():
    cols = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    found, w, residual = nonneg_combination(cols, np.array([1.0, 2.0, 0.5]))
    assert not found
    assert abs(residual - 0.5) < 1e-9
    found, w, _ = nonneg_combination(cols, np.array([1.0, 2.0, 0.0]))
    assert found and np.allclose(w, [1.0, 2.0], atol=1e-9)


# ---------------------------------------------------------------------------
# regions, membership, minkowski sums
# ---------------------------------------------------------------------------

def test_region_requires_points():
    with pytest.raises(EmptyRegionError):
        RateRegion([])


def test_minkowski_identity_element():
    a = RateRegion([[1, 2, 3], [0, 1, 0]], [TP])
    out = minkowski_sum(a, RateRegion([[0, 0, 0]]))
    assert np.allclose(np.sort(out.points, axis=0), np.sort(a.points, axis=0))
    assert len(out.rays) == 1


def test_minkowski_tp_plus_sd_contains_ebit_waste():
    a = RateRegion([[0, 0, 0]], [TP])
    b = RateRegion([[0, 0, 0]], [SD])
    assert contains(minkowski_sum(a, b), [0, 0, -2])


def test_region_contains_own_generators():
    rng = np.random.default_rng(31)
    for _ in range(20):
        reg = random_region(rng)
        for p in reg.points:
            assert reg.contains(p)


def test_minkowski_membership_of_sums():
    rng = np.random.default_rng(37)
    for _ in range(10):
        a, b = random_region(rng, 4, 2), random_region(rng, 4, 2)
        s = minkowski_sum(a, b)
        for _ in range(20):
            la = rng.dirichlet(np.ones(len(a.points)))
            lb = rng.dirichlet(np.ones(len(b.points)))
            x = la @ a.points + (rng.uniform(0, 1, len(a.rays)) @ a.rays if len(a.rays) else 0)
            y = lb @ b.points + (rng.uniform(0, 1, len(b.rays)) @ b.rays if len(b.rays) else 0)
            assert s.contains(x + y, tol=1e-7)


def test_ray_idempotence():
    cone = RateRegion([[0, 0, 0]], [TP])
    double = minkowski_sum(cone, cone)
    rng = np.random.default_rng(41)
    for _ in range(50):
        t = rng.uniform(0, 3)
        assert double.contains(t * TP) == cone.contains(t * TP)
        probe = rng.uniform(-1, 1, 3)
        assert double.contains(probe) == cone.contains(probe)


# ---------------------------------------------------------------------------
# facet enumeration
# ---------------------------------------------------------------------------

def normalize_to_unit_scale(a, b):
    s = np.max(np.abs(a))
    return tuple(np.round(np.concatenate([a / s, [b / s]]), 9))


def test_unit_region_facets_exact():
    fd = facets_3d(unit_region())
    assert fd.dim == 3
    got = {normalize_to_unit_scale(a, b) for a, b in fd.inequalities}
    want = {normalize_to_unit_scale(np.array(n), 0.0)
            for n in ([1, 1, 1], [0, 1, 1], [1, 2, 0])}
    assert got == want


def test_facets_degenerate_ray():
    reg = RateRegion([[0, 0, 0]], [[-1, 0, 0]])
    fd = facets_3d(reg)
    assert fd.dim == 1
    eq = {normalize_to_unit_scale(a, b) for a, b in fd.equalities}
    assert eq == {normalize_to_unit_scale(np.array([0, 1, 0]), 0.0),
                  normalize_to_unit_scale(np.array([0, 0, 1]), 0.0)}
    assert len(fd.inequalities) == 1
    a, b = fd.inequalities[0]
    a, b = a / np.max(np.abs(a)), b / np.max(np.abs(a))
    assert np.allclose(a, [1, 0, 0]) and abs(b) < 1e-12


def test_facets_single_point():
    fd = facets_3d(RateRegion([[1.0, -2.0, 0.5]]))
    assert fd.dim == 0
    assert len(fd.equalities) == 3
    assert fd.contains([1.0, -2.0, 0.5])
    assert not fd.contains([1.0, -2.0, 0.6])


def test_facets_generators_satisfy_description():
    rng = np.random.default_rng(43)
    for _ in range(25):
        reg = random_region(rng)
        fd = facets_3d(reg)
        for p in reg.points:
            assert fd.contains(p, tol=1e-7)
        for r in reg.rays:
            for a, _ in fd.equalities:
                assert abs(a @ r) < 1e-7
            for a, _ in fd.inequalities:
                assert a @ r < 1e-7


def test_facet_membership_agrees_with_lp():
    rng = np.random.default_rng(47)
    compared = 0
    for _ in range(10):
        reg = random_region(rng)
        fd = facets_3d(reg)
        ineqs = fd.all_inequalities()
        for _ in range(100):
            x = rng.uniform(-3, 3, 3)
            margins = [abs(a @ x - b) for a, b in ineqs]
            if margins and min(margins) < 1e-6:
                continue                      # skip razor-edge cases
            compared += 1
            assert fd.contains(x, tol=1e-7) == contains(reg, x, tol=1e-8)
    assert compared > 800


# ---------------------------------------------------------------------------
# clipping and sliding
# ---------------------------------------------------------------------------

def test_clip_unit_region_positive_octant_is_origin():
    out = clip(unit_region(), "+++")
    assert np.allclose(out.points, [[0, 0, 0]])
    assert len(out.rays) == 0


def test_clip_unit_region_father_quadrant():
    # with C = 0 the unit cone cannot produce positive Q: only ebit waste is left
    out = clip(unit_region(), "0+-")
    assert np.allclose(out.points, [[0, 0, 0]], atol=1e-9)
    assert len(out.rays) == 1
    assert np.allclose(out.rays[0], [0, 0, -1], atol=1e-9)


def test_clip_free_spec_returns_region():
    reg = unit_region()
    assert clip(reg, "***") is reg
    assert clip(reg, "±±±") is reg


def test_clip_idempotent():
    rng = np.random.default_rng(53)
    reg = RateRegion(rng.uniform(-1, 1, size=(5, 3)), [TP, ED])
    once = clip(reg, "-**")
    twice = clip(once, "-**")
    for _ in range(100):
        x = rng.uniform(-2, 2, 3)
        assert once.contains(x) == twice.contains(x)


def test_clip_empty_raises():
    with pytest.raises(EmptyRegionError):
        clip(RateRegion([[1.0, 1.0, 1.0]]), "---")


def test_slide_sd_lands_on_quadrant():
    reg = RateRegion([[1.0, 0.5, 2.0]])
    out = slide_and_clip(reg, SD, "+-0")
    assert np.allclose(out.points, [[5.0, -1.5, 0.0]], atol=1e-9)


def test_slide_ed_lands_on_plane():
    reg = RateRegion([[3.0, 2.0, 1.0]])
    out = slide_and_clip(reg, ED, "+0*")
    assert np.allclose(out.points, [[3.0, 0.0, 3.0]], atol=1e-9)


def test_slide_then_unslide_recovers_origin():
    reg = RateRegion([[0.0, 0.0, 0.0]])
    for ray in (TP, SD, ED):
        slid = slide_and_clip(reg, ray, "***")
        back = slide_and_clip(slid, ray, "***", inverse=True)
        assert back.contains([0, 0, 0])


# ---------------------------------------------------------------------------
# extremum and JSON
# ---------------------------------------------------------------------------

def test_extremum_on_unit_region():
    val, x = extremum(unit_region(), [0, 0, 1], fixed={"C": 0.0, "Q": 0.0}, sense="max")
    assert abs(val) < 1e-9
    val, _ = extremum(unit_region(), [0, 0, 1], fixed={"C": 0.0, "Q": 0.0}, sense="min")
    assert val == float("-inf")


def test_extremum_infeasible_fixed():
    with pytest.raises(ValueError):
        extremum(unit_region(), [1, 0, 0], fixed={"Q": 5.0, "E": 5.0})


def test_region_json_roundtrip():
    reg = unit_region()
    d = region_to_dict(reg)
    back = region_from_dict(d)
    assert np.allclose(back.points, reg.points)
    assert np.allclose(np.sort(back.rays, axis=0), np.sort(reg.rays, axis=0))
    assert len(d["facets"]) == 3


def test_orthant_spec_parse():
    assert OrthantSpec.parse("0+-").signs == ("0", "+", "-")
    assert OrthantSpec.parse("(+, -, +)").signs == ("+", "-", "+")
    assert OrthantSpec.parse("±±±").is_free
    with pytest.raises(ValueError):
        OrthantSpec.parse("++")
