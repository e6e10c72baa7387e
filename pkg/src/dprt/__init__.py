"""Exact discrete periodic Radon transform with strip-scalable hardware models."""

from ._validation import InvalidRadonArray, WidthViolation
from .core import Image, RadonArray, forward_dprt, inverse_dprt, total_sum
from .cost import cycle_model, pareto_front, resource_model, tree_resources
from .estimator import DPRTTransformer
from .strips import make_strip_plan, strip_dprt, strip_idprt

__all__ = [
    "DPRTTransformer",
    "Image",
    "InvalidRadonArray",
    "RadonArray",
    "WidthViolation",
    "cycle_model",
    "forward_dprt",
    "inverse_dprt",
    "make_strip_plan",
    "pareto_front",
    "resource_model",
    "strip_dprt",
    "strip_idprt",
    "total_sum",
    "tree_resources",
]
