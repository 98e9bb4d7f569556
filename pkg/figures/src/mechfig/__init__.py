"""Figure rendering for the mechanical-correlation simulator's CSV output."""

__version__ = "0.1.0"

from .render import FigureJob, GridError, SchemaError, KINDS, render
