import numpy as np
import pytest
from conftest import oracle_h2

from tripletrade import (apply_channel, bell_state, coherent_information, dephasing_channel,
                         dephasing_reference, erased_state, erased_state_mother_point,
                         erased_state_reference, erased_state_static_region,
                         erased_state_wedge_height, erasure_channel, extremum,
                         mutual_information, parse_model_spec, purify, von_neumann)


@pytest.mark.parametrize("eps", [0.0, 0.1, 0.25, 0.5, 0.9])
def test_erased_state_reference_matches_engine(eps):
    ref = erased_state_reference(eps)
    rho = erased_state(eps)
    assert abs(von_neumann(rho, "A") - ref.h_a) < 1e-9
    assert abs(von_neumann(rho, "B") - ref.h_b) < 1e-9
    assert abs(von_neumann(rho, ("A", "B")) - ref.h_ab) < 1e-9
    assert abs(coherent_information(rho, "A", "B") - ref.coherent_info) < 1e-9
    assert abs(0.5 * mutual_information(rho, "A", "B") - ref.half_mi_ab) < 1e-9
    psi = purify(rho, "E").to_density()
    assert abs(0.5 * mutual_information(psi, "A", "E") - ref.half_mi_ae) < 1e-9


def test_erased_state_reference_frozen_values():
    ref = erased_state_reference(0.25)
    assert abs(ref.h_b - 1.5612781244591328) < 1e-12
    assert abs(ref.h_ab - 1.0612781244591328) < 1e-12
    assert ref.coherent_info == 0.5


def test_erased_state_equals_channel_on_bell():
    for eps in (0.15, 0.4):
        via_channel = apply_channel(erasure_channel(eps), bell_state().to_density(), on="B")
        direct = erased_state(eps)
        assert np.max(np.abs(via_channel.matrix - direct.matrix)) < 1e-12


def test_erasure_flag_coherence_exactly_zero():
    out = apply_channel(erasure_channel(0.3), bell_state().to_density(), on="B")
    m = out.matrix.reshape(2, 3, 2, 3)
    # no coherence between the code space {|0>,|1>} and the flag |e>
    assert np.max(np.abs(m[:, :2, :, 2])) == 0.0
    assert np.max(np.abs(m[:, 2, :, :2])) == 0.0


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 1.0])
def test_dephasing_reference(p):
    ref = dephasing_reference(p)
    assert abs(ref.quantum_capacity - (1 - oracle_h2(p / 2))) < 1e-12
    # engine check: coherent information of the Bell-input output state
    from tripletrade import apply_isometry, isometric_extension

    iso = isometric_extension(dephasing_channel(p), out_name="B", env_name="E")
    psi = apply_isometry(iso, bell_state("A", "B"), on="B").to_density()
    assert abs(coherent_information(psi, "A", "B") - ref.quantum_capacity) < 1e-9
    assert abs(von_neumann(psi, "E") - ref.env_entropy_on_bell) < 1e-9


def test_dephasing_anchor_value():
    assert abs(dephasing_reference(0.2).quantum_capacity - 0.5310044064107188) < 1e-12


def test_mother_point():
    assert np.allclose(erased_state_mother_point(0.25), [0, -0.25, 0.75])


def test_wedge_heights():
    assert erased_state_wedge_height(0.25, 0.0) == 0.0
    assert erased_state_wedge_height(0.25, 0.5) == 0.5
    assert erased_state_wedge_height(0.25, 0.25) == 0.25
    assert erased_state_wedge_height(0.0, 0.0) == 1.0
    assert erased_state_wedge_height(0.5, 1.0) == 0.0


def test_static_region_hashing_point_and_wedge():
    eps = 0.25
    reg = erased_state_static_region(eps)
    assert reg.contains([-2 * eps, 0, 1 - 2 * eps])        # hashing point
    assert reg.contains([-0.25, 0, 0.25])                  # time-share midpoint
    for c in np.linspace(0.0, 2 * eps, 11):
        emax, _ = extremum(reg, [0, 0, 1], fixed={"C": -c, "Q": 0.0}, sense="max")
        assert abs(emax - erased_state_wedge_height(eps, c)) < 1e-9


def test_model_spec_parsing():
    spec = parse_model_spec("dephasing:p=0.2")
    assert spec.kind == "channel" and spec.params == {"p": 0.2}
    assert str(spec) == "dephasing:p=0.2"
    assert parse_model_spec("bell").kind == "state"
    with pytest.raises(ValueError):
        parse_model_spec("squeezer:p=1")
    with pytest.raises(ValueError):
        parse_model_spec("dephasing:q=0.2")
    with pytest.raises(ValueError):
        parse_model_spec("dephasing")
