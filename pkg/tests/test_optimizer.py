import numpy as np
import pytest
from conftest import oracle_h2

from tripletrade import (RateRegion, SweepConfig, bell_state, boundary_curve,
                         casr_octant_bounds, cef_octant_bounds, dephasing_channel,
                         erased_state, haar_unitary, identity_channel,
                         max_coherent_information, simplex_weights, sweep_casr, sweep_cef,
                         unit_region)
from tripletrade.optimizer import schmidt_state
from tripletrade.sigma import single_state_ensemble
from tripletrade.tradeoff import assemble_region, cef_point


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(max_outcomes=0)
    with pytest.raises(ValueError):
        SweepConfig(samples=-1)


def test_haar_unitary_is_unitary_and_seeded():
    rng = np.random.default_rng(5)
    u = haar_unitary(4, rng)
    assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12
    rng2 = np.random.default_rng(5)
    assert np.array_equal(u, haar_unitary(4, rng2))


def test_simplex_weights():
    rng = np.random.default_rng(9)
    for k in (1, 2, 5):
        w = simplex_weights(k, rng)
        assert w.shape == (k,)
        assert np.all(w >= 0) and abs(w.sum() - 1) < 1e-12


def test_sweep_determinism_and_prefix_property():
    ch = dephasing_channel(0.2)
    small = sweep_cef(ch, SweepConfig(seed=21, samples=6))
    again = sweep_cef(ch, SweepConfig(seed=21, samples=6))
    assert len(small) == len(again)
    for a, b in zip(small, again):
        assert np.array_equal(a.triple, b.triple)
        assert a.provenance == b.provenance
    # enlarging the budget keeps every earlier sample (same child streams)
    big = sweep_cef(ch, SweepConfig(seed=21, samples=12))
    small_keys = {(p.provenance, tuple(np.round(p.triple, 12))) for p in small}
    big_keys = {(p.provenance, tuple(np.round(p.triple, 12))) for p in big}
    assert small_keys <= big_keys


def test_monotone_improvement():
    ch = dephasing_channel(0.2)
    small = assemble_region(sweep_cef(ch, SweepConfig(seed=3, samples=4)))
    big = assemble_region(sweep_cef(ch, SweepConfig(seed=3, samples=12)))
    rng = np.random.default_rng(15)
    for _ in range(100):
        x = rng.uniform(-2, 2, 3)
        if small.contains(x):
            assert big.contains(x, tol=1e-7)


def test_forced_single_sample_identity():
    pts = sweep_cef(identity_channel(2), SweepConfig(seed=0, samples=0))
    assert len(pts) == 1
    assert np.allclose(pts[0].triple, [0, 1, 0], atol=1e-9)


def test_structured_grid_traces_dephasing_boundary():
    ch = dephasing_channel(0.2)
    pts = sweep_cef(ch, SweepConfig(seed=0, samples=0, grid=101))
    h2 = oracle_h2(0.1)
    budget = h2 / 2
    best_q = max(p.triple[1] for p in pts if -p.triple[2] <= budget + 1e-9)
    assert abs(best_q - (1 - h2 / 2)) < 1e-6


def test_max_coherent_information_dephasing():
    got = max_coherent_information(dephasing_channel(0.2),
                                   SweepConfig(seed=0, samples=0, grid=101))
    assert abs(got - (1 - oracle_h2(0.1))) < 1e-4


def test_refinement_improves_capacity_estimate():
    # with a grid that misses mu = 1/2, golden-section refinement recovers it
    ch = dephasing_channel(0.2)
    coarse = max_coherent_information(ch, SweepConfig(seed=0, samples=0, grid=4))
    refined = max_coherent_information(ch, SweepConfig(seed=0, samples=0, grid=4,
                                                       refine_iters=40))
    cap = 1 - oracle_h2(0.1)
    assert refined >= coarse - 1e-12
    assert abs(refined - cap) < 1e-6


def test_every_swept_point_passes_own_bounds():
    ch = dephasing_channel(0.2)
    for p in sweep_cef(ch, SweepConfig(seed=33, samples=25)):
        assert cef_octant_bounds(p.sigma, p.triple, tol=1e-8).passed
    rho = erased_state(0.25)
    for p in sweep_casr(rho, SweepConfig(seed=33, samples=25)):
        assert casr_octant_bounds(p.sigma, p.triple, tol=1e-8).passed


def test_sweep_casr_contains_mother_and_respects_envelope():
    pts = sweep_casr(erased_state(0.25), SweepConfig(seed=2, samples=10))
    assert any(np.max(np.abs(p.triple - [0, -0.25, 0.75])) < 1e-9 for p in pts)
    bell_pts = sweep_casr(bell_state().to_density(), SweepConfig(seed=2, samples=30))
    for p in bell_pts:
        assert p.triple[2] + p.triple[1] <= 1 + 1e-8     # E <= 1 + |Q|


def test_hull_dominates_samples():
    ch = dephasing_channel(0.2)
    pts = sweep_cef(ch, SweepConfig(seed=8, samples=200))
    reg = assemble_region(pts)
    for p in pts:
        assert reg.contains(p.triple, tol=1e-7)


# ---------------------------------------------------------------------------
# boundary curves
# ---------------------------------------------------------------------------

def test_boundary_curve_unit_region_qe_plane():
    curve = boundary_curve(unit_region(), "***", drop="C")
    assert curve.axes == ("Q", "E")
    # the frontier is the line Q + E = 0 through the origin
    assert np.allclose(curve.vertices, [[0, 0]], atol=1e-9)
    assert curve.ray_low is not None and curve.ray_high is not None
    assert abs(curve.ray_low @ np.array([1, 1])) < 1e-9
    assert abs(curve.ray_high @ np.array([1, 1])) < 1e-9


def test_boundary_curve_single_cef_point_cq_plane():
    pt = cef_point(dephasing_channel(0.2), single_state_ensemble(schmidt_state(0.5), 2, 2))
    # free entanglement budget: the quantum corner keeps the full one-shot rate
    curve = boundary_curve([pt], "++*", drop="E")
    assert curve.axes == ("C", "Q")
    assert abs(max(v[1] for v in curve.vertices) - pt.triple[1]) < 1e-9
    assert abs(max(v[0] for v in curve.vertices) - 2 * pt.triple[1]) < 1e-9
    # zero-entanglement slice: the quantum corner drops to the coherent information
    sliced = boundary_curve([pt], "++0", drop="E")
    ic = pt.triple[1] + pt.triple[2]
    assert abs(max(v[1] for v in sliced.vertices) - ic) < 1e-9
    assert abs(max(v[0] for v in sliced.vertices) - ic) < 1e-9


def test_boundary_curve_empty_points_is_unit_frontier():
    c1 = boundary_curve([], "***", drop="C")
    c2 = boundary_curve(unit_region(), "***", drop="C")
    assert np.allclose(c1.vertices, c2.vertices)


def test_boundary_curve_csv_shape():
    curve = boundary_curve(unit_region(), "***", drop="C")
    lines = curve.csv_lines()
    assert lines[0] == "kind,Q,E"
    assert any(line.startswith("vertex,") for line in lines)
