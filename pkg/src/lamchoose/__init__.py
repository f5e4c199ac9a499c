"""Exact lambda-choosability tools and a randomised large-girth separation construction."""

from .graph import INFINITE, PartiteGraph, degeneracy, girth, is_k_colourable, parse_graph, serialize_graph
from .partitions import OrderWitness, Partition, enumerate_partitions, le, refines
from .assignments import (BudgetExceeded, Certificate, ListAssignment, enumerate_lambda_assignments,
                          is_lambda_choosable, l_colour, validate_assignment)

__all__ = [
    "INFINITE", "PartiteGraph", "degeneracy", "girth", "is_k_colourable", "parse_graph",
    "serialize_graph", "OrderWitness", "Partition", "enumerate_partitions", "le", "refines",
    "BudgetExceeded", "Certificate", "ListAssignment", "enumerate_lambda_assignments",
    "is_lambda_choosable", "l_colour", "validate_assignment",
]
