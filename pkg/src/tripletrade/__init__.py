"""Trade-off rate regions for classical communication, quantum communication, and entanglement.

Rate triples are ordered (C, Q, E) in cbits/qubits/ebits per copy or channel
use; a negative rate means the protocol consumes that resource, positive that
it generates it.
"""

from .entropy import (binary_entropy, coherent_information, conditional_mutual_information,
                      mutual_information, von_neumann)
from .geometry import (AXES, EmptyRegionError, FacetDescription, OrthantSpec, RateRegion,
                       clip, contains, extremum, facets_3d, minkowski_sum, region_from_dict,
                       region_to_dict, slide_and_clip)
from .models import (DephasingReference, ErasedStateReference, ModelSpec, bell_state,
                     dephasing_channel, dephasing_reference, erased_state,
                     erased_state_mother_point, erased_state_reference,
                     erased_state_static_region, erased_state_wedge_height, erasure_channel,
                     maximally_entangled, parse_model_spec)
from .optimizer import (BoundaryCurve, SweepConfig, boundary_curve, haar_state, haar_unitary,
                        max_coherent_information, schmidt_state, simplex_weights,
                        structured_ensembles, sweep_casr, sweep_cef)
from .quantum import (DensityMatrix, Instrument, InvariantError, Isometry, PureState,
                      QuantumChannel, Subsystem, apply_channel, apply_isometry,
                      dilate_instrument, fuse, identity_channel, isometric_extension,
                      partial_trace, purify, reorder, tensor, tensor_channel, tensor_pure,
                      trivial_instrument)
from .rilang import (Derivability, NetRate, ResourceExpr, ResourceTerm, RIParseError,
                     RIRateError, derivable, net_rate, parse, print_expr)
from .sigma import (Ensemble, build_sigma_dynamic, build_sigma_static, ensemble_from_json,
                    ensemble_to_json, instrument_from_json, instrument_outcome_probabilities,
                    instrument_to_json, make_ensemble, product_ensemble,
                    single_state_ensemble)
from .tradeoff import (BOUND_PREDICATES, GapResult, OneShotPoint, assemble_region,
                       caq_bounds, casr_octant_bounds, cef_octant_bounds, cef_point,
                       casr_point, ea_vs_tp_gap, eaq_classical_bounds, tensor_copies)
from .units import (ED, SD, TP, BoundCheck, UnitCoefficients, Verdict, octant_bound_check,
                    unit_coefficients, unit_region)

__version__ = "0.1.0"
