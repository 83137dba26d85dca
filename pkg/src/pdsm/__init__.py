"""Stable matchings for p-party marriage problems with simple preference lists."""
from .compound import CompoundRecipe, Level, default_recipe, run_compound
from .elemental import (
    DirectedTree,
    check_tree,
    count_elemental,
    enumerate_trees,
    path_tree,
    run_elemental,
)
from .errors import (
    BoundViolation,
    GuardError,
    ParseError,
    PdsmError,
    StructureError,
    ValidationError,
)
from .gale_shapley import Bijection, gs, is_stable_2party
from .generator import GenSpec, generate
from .model import ElementRef, Instance, Matching, rank, relative, validate
from .reduction import Partition, expand, reduce
from .stability import BlockingReport, enumerate_stable, is_blocking, verify

__version__ = "0.1.0"
