"""Quantum discord of a dipolar spin chain coupled to an impurity spin."""
from .analytic3q import discord_analytic, entropy_A0, entropy_B, entropy_total
from .bloch import BlochVector
from .optimizer import GridConfig, OptimizerConfig, minimize_evolutionary, minimize_grid
from .qinfo import (
    ConditionalEntropy,
    DiscordResult,
    conditional_entropy,
    discord,
    measure_B,
    measurement_projectors,
    mutual_information,
    von_neumann_entropy,
)
from .spin_model import (
    Couplings,
    DensityMatrix,
    ModelEvolution,
    SystemSpec,
    couplings_from_geometry,
    evolve,
    hamiltonian_dz,
    hamiltonian_zz,
    initial_state,
    spin_operator,
)

__version__ = "0.1.0"
