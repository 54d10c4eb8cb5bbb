"""Small-amplitude periodic waves of the b-family Novikov equation and their modulational stability."""
from .asymptotics import ExpansionCoeffs, WaveFamilyPoint, expansion_coeffs, family_point, speed_expansion, wave_expansion
from .errors import *  # noqa: F401,F403
from .hill import BlochSample, assemble_bloch_matrix, bloch_eigs, collision_report, omega, spectrum_symmetry_check, xi_sweep
from .modulation import (
    CriticalCubic,
    ReducedMatrices,
    RegionBoundary,
    StabilityVerdict,
    Verdict,
    assemble_reduced,
    classify,
    critical_cubic,
    delta_expansion,
    g_index,
    lemma52_case,
    region_boundary,
    threshold_x0,
)
from .params import Equilibrium, ModelParams, equilibrium, general_equilibrium, potential, potential_d1, potential_d2, validate_params
from .wave import FourierWave, check_validity, newton_refine, profile_residual

__version__ = "0.1.0"
