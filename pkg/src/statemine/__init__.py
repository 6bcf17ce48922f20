"""Reverse-engineer state machines from convention-following Java code."""

from .extractor import Extraction, State, StateMachine, Transition, extract
from .hotgen import find_owner, find_owner_oracle, generate_plan
from .metamodel import MetaModel, augment_opposites, load_metamodel, shipped_metamodel
from .model import Model

__all__ = [
    "Extraction",
    "MetaModel",
    "Model",
    "State",
    "StateMachine",
    "Transition",
    "augment_opposites",
    "extract",
    "find_owner",
    "find_owner_oracle",
    "generate_plan",
    "load_metamodel",
    "shipped_metamodel",
]
