"""Classical and quantum correlations of a thermal dipolar spin-1/2 dimer.

Modules
-------
model          Hamiltonian, spectrum, thermal X state, correlators
correlations   entropies, mutual information, discord, concurrence (closed forms)
oracle         brute-force measurement optimization and general concurrence
asymptotics    high- and low-temperature expansions
extremum       temperature of maximal discord
materials      SI bridge and material predictions
kernels        numba / numpy hot loops (set DIPOLAR_DISCORD_DISABLE_NUMBA=1 for numpy)
"""
from .correlations import (
    CorrelationSet,
    classical_correlation,
    concurrence,
    correlation_set,
    discord,
    discord_branches,
    discord_thermal_zero_field,
    entanglement,
    entropy_joint,
    entropy_sub,
    geometric_discord_zero_field,
    mutual_information,
    zero_field_classical,
    zero_field_discord,
)
from .errors import DomainError, InvalidStateError, NoBracketError, UndefinedAtFieldError
from .extremum import ExtremumResult, locate_max_in_field, solve_zero_field_max
from .kernels import BACKEND
from .materials import MaterialPrediction, MaterialSpec, dipolar_constant, predict
from .model import (
    Correlators,
    DimerParams,
    Spectrum,
    ThermalPoint,
    XState,
    correlators,
    gibbs_xstate,
    hamiltonian_matrix,
    partition_function,
    spectrum,
    xstate_from_correlators,
)

__version__ = "0.1.0"
