"""Classical and quantum projective-simulation agents learning the invasion game."""

from .classical import ClassicalAgent, LearningParams, WeightedClipGraph, invasion_graph
from .compressed import CompressedAgent, CompressedRegister, DriveCouplings
from .dynamics import JumpOperator, Trajectory, evolve_closed, evolve_lindblad, first_peak_time, observable_series
from .environment import InvasionGame, LearningCurve, TrialRecord, efficiency_curve, run_interacting_trial, run_trial
from .excitation import CouplingSpec, ExcitationAgent, ExcitationBasis
from .harness import ExperimentConfig, emit_csv, emit_svg, parse_config, run_ensemble
from .numerics import TimeGrid

__version__ = "0.1.0"
