"""Cayley graphs of split metacyclic groups: structure, spectra and Ramanujan checks."""

from .errors import ConvergenceError, DomainError, ParameterError, StructureError
from .group import (
    GroupParams,
    Regularity,
    VertexLabel,
    index_to_vertex_label,
    unit_order,
    validate_params,
    vertex_label_to_index,
)

__version__ = "0.1.0"
