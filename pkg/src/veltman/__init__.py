"""Veltman-frame machinery for interpretability logics.

Parsing and schemata (formula), frames/models/forcing (model), derived
relations (relations), classification and invariants (conditions),
quasi-frame closure (closure), bounded search (search), and the
step-by-step model construction (construct).
"""

from .formula import (
    BOT,
    And,
    Box,
    Diamond,
    Formula,
    Iff,
    Implies,
    Neg,
    Or,
    Rhd,
    SCHEMAS,
    Schema,
    Var,
    adequate_closure,
    instantiate,
    parse,
    print_formula,
    single_negation,
)
from .model import (
    Frame,
    LabeledFrame,
    Model,
    forces,
    generated_submodel,
    induced_model,
    valid_on_model,
    validate_frame,
)
from .search import FrameClass, enumerate_frames, find_countermodel, satisfiable

__all__ = [
    "BOT",
    "And",
    "Box",
    "Diamond",
    "Formula",
    "FrameClass",
    "Frame",
    "Iff",
    "Implies",
    "LabeledFrame",
    "Model",
    "Neg",
    "Or",
    "Rhd",
    "SCHEMAS",
    "Schema",
    "Var",
    "adequate_closure",
    "enumerate_frames",
    "find_countermodel",
    "forces",
    "generated_submodel",
    "induced_model",
    "instantiate",
    "parse",
    "print_formula",
    "satisfiable",
    "single_negation",
    "valid_on_model",
    "validate_frame",
]

__version__ = "0.1.0"
