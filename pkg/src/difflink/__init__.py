"""Diffusion LMS over sensor networks with adaptive link selection."""

__version__ = "0.1.0"

from .topology import (NetworkTopology, generate_random_geometric,
                       metropolis_weights, neighbor_set)
from .diffusion import ATCCombiner, run_network
from .esls import ESLSCombiner
from .sils import SILSCombiner, SilsParams
from .metrics import aggregate, compare_curves
from .config import ExperimentConfig, load_config
from .harness import run_experiment, simulate
