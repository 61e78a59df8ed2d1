"""Figure rendering for pgqed datasets; no physics logic here."""

__version__ = "0.1.0"

from .datasets import Dataset, MissingColumnError, load_dataset
from .render import RenderedPanel, gallery, render

__all__ = ["Dataset", "MissingColumnError", "RenderedPanel", "gallery",
           "load_dataset", "render"]
