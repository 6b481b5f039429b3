"""Turing-Hopf bifurcation analysis for a delayed reaction-diffusion Schnakenberg system."""

from .errors import *  # noqa: F401,F403
from .model import CharacteristicMatrix, Equilibrium, ModelParams, char_value, equilibrium, mode_coeffs
from .turing import classify_turing, d_corner, eps_star, first_turing_curve, thresholds
from .hopf import TuringHopfPoint, hopf_mode, hopf_thresholds, min_hopf_mode, transversality, turing_hopf_point
from .normal_form import analyze, planar_unfolding, region_of, unfolding_case

__version__ = "0.1.0"
