"""Two-mode cavity entanglement generated by a driven V-type atom."""
from .atom import (AtomSteadyState, DressedBasis, SystemParams, atom_steady_state,
                   bloch_generator, dressed_basis, inverse_elements,
                   population_inversion_closed_form, regression_matrix, trapping_states)
from .coeffs import (ModeCoefficients, coeffs_config_A, coeffs_config_B, combined_coupling_D,
                     f_functions, simplified_A, simplified_B, stark_cancel_delta12)
from .duan import EntanglementReport, duan_report
from .moments import MomentState, moment_system, stability, steady_moments

__version__ = "0.1.0"
