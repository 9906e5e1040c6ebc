"""Bohr-Sommerfeld quantization of one-dimensional potential wells."""

from .action import QuantizerSettings, action_integral, level_count, quantize, threshold_action
from .potentials import (
    Constants,
    Expression,
    Harmonic,
    LJFamily,
    Morse,
    Polynomial,
    PoschlTeller,
    PoschlTellerTrig,
    RosenMorse,
    SpectrumLevel,
)
from .wellseries import expand_well, perturbative_energy

__version__ = "0.1.0"
