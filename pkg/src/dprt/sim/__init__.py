"""Cycle-accurate simulators of the forward and inverse DPRT architectures."""

from .components import DisciplineViolation, TraceRecord, format_trace
from .forward import FDPRTMachine, SFDPRTMachine, run_fdprt, run_sfdprt
from .inverse import IFDPRTMachine, ISFDPRTMachine, run_ifdprt, run_isfdprt
from .report import CycleReport, InverseDatapathWidths

__all__ = [
    "CycleReport",
    "DisciplineViolation",
    "FDPRTMachine",
    "IFDPRTMachine",
    "ISFDPRTMachine",
    "InverseDatapathWidths",
    "SFDPRTMachine",
    "TraceRecord",
    "format_trace",
    "run_fdprt",
    "run_ifdprt",
    "run_isfdprt",
    "run_sfdprt",
]
