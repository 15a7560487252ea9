"""Monte Carlo simulation of Hammersley and exponential-lattice last-passage
percolation, with a verification harness for stationary coupling arguments."""

from .config import ConfigError, ExperimentConfig, load_config, make_config
from .equilibrium import CoupledSample, ParticleConfig, ScalingParams, evolve, exit_points, l_lambda
from .harness import RunSummary, run_experiment
from .lattice import LatticeField, lattice_last_passage, sample_exp_field
from .lpp import last_passage, passage_profile
from .rng import PointSet, Rect, SeedSpec, Substream, derive_stream, sample_ppp

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ExperimentConfig", "load_config", "make_config",
    "CoupledSample", "ParticleConfig", "ScalingParams", "evolve", "exit_points", "l_lambda",
    "RunSummary", "run_experiment",
    "LatticeField", "lattice_last_passage", "sample_exp_field",
    "last_passage", "passage_profile",
    "PointSet", "Rect", "SeedSpec", "Substream", "derive_stream", "sample_ppp",
]
