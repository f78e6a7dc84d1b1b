"""
Utils Module

Small helpers shared across FloatForge: order-independent reductions and
logging setup for the command line.
"""

from floatforge.utils.reductions import deterministic_sum, deterministic_vector_sum
from floatforge.utils.logs import configure_logging

__all__ = ["deterministic_sum", "deterministic_vector_sum", "configure_logging"]
