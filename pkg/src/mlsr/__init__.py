"""Model checking, bisimulation, reductions and proof checking for modal
logic with stepwise removal."""
from importlib import resources

from .checker import check, evaluate, find_countermodel
from .formula import parse, to_text
from .kripke import Model, PointedModel

__all__ = ["Model", "PointedModel", "check", "data_path", "evaluate", "find_countermodel",
           "parse", "to_text"]


def data_path(name: str):
    """Path to a bundled example file (models, QBF instance, derivations, schemas)."""
    return resources.files(__package__).joinpath("data", name)
