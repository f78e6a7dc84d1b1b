"""
Free Surface Module

Volume-of-fluid interface tracking: cell states and fill levels, per-link
mass exchange, surface normals, gas-side reconstruction and the cell
conversion rules.
"""

from floatforge.freesurface.cells import (
    CellState,
    CellStateField,
    FillSpec,
    fill_fraction,
    initialize_cells,
)
from floatforge.freesurface.interface import (
    mass_exchange,
    mass_exchange_field,
    reconstruct_interface_pdfs,
    reconstruction_links,
    surface_normal,
    surface_normals,
)
from floatforge.freesurface.conversion import (
    ConversionLog,
    check_closed_layer,
    close_interface_layer,
    convert_cells,
    distribute_excess_mass,
)

__all__ = [
    "CellState",
    "CellStateField",
    "FillSpec",
    "fill_fraction",
    "initialize_cells",
    "mass_exchange",
    "mass_exchange_field",
    "reconstruct_interface_pdfs",
    "reconstruction_links",
    "surface_normal",
    "surface_normals",
    "ConversionLog",
    "check_closed_layer",
    "close_interface_layer",
    "convert_cells",
    "distribute_excess_mass",
]
