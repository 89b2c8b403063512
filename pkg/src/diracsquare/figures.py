"""Datasets behind the transmission and spectrum figures (m = a = 1 throughout)."""
from __future__ import annotations

import numpy as np

from ._csv import format_csv
from .bound import find_bound_states
from .core import DeltaConvention, ModelParams, r0_fixed_energy
from .scattering import transmission_scan

FIGURES = ("fig2", "fig3", "fig4", "fig5")

# (label, c_p, c_sigma) for the four transmission curves
FIG3_SETS = (
    ("solid", 0.0, 1.0),
    ("solid_dot", 1.0, 0.0),
    ("long_dash", 1.0, 0.5),
    ("pointed", 1.0, -0.5),
)
FIG2_C_SIGMA = 2.0
FIG5_C_SIGMA = 2.0

FIG2_CP = np.linspace(-5.0, 5.0, 201)
FIG3_ENERGY = np.linspace(-10.0, 10.0, 2001)
FIG4_C_SIGMA = np.linspace(0.0, 4.0, 81)
FIG5_CP = np.linspace(-3.0, 3.0, 121)


class EmptyDatasetError(RuntimeError):
    pass


def fig2_rows(convention=DeltaConvention.PAPER_HALF, cp_grid=FIG2_CP):
    """T along the r = 0 locus: each c_p fixes E = c_p**2/c_sigma - m."""
    rows = []
    for cp in cp_grid:
        p = ModelParams(c_sigma=FIG2_C_SIGMA, c_p=float(cp), delta_convention=convention)
        e = r0_fixed_energy(p)
        t = transmission_scan(p, [e])[0].T
        rows.append((float(cp), e, t))
    return rows


def fig3_rows(convention=DeltaConvention.PAPER_HALF, grid=FIG3_ENERGY):
    rows = []
    for label, cp, cs in FIG3_SETS:
        p = ModelParams(c_sigma=cs, c_p=cp, delta_convention=convention)
        for row in transmission_scan(p, grid):
            rows.append((label, cp, cs, row.energy, row.T))
    return rows


def fig4_rows(convention=DeltaConvention.PAPER_HALF, grid=FIG4_C_SIGMA):
    rows = []
    for cs in grid:
        spectrum = find_bound_states(ModelParams(c_sigma=float(cs), c_p=0.0, delta_convention=convention))
        rows.extend((float(cs), i, e) for i, e in enumerate(spectrum.energies))
    return rows


def fig5_rows(grid=FIG5_CP):
    """Both delta conventions side by side, tagged in the first column."""
    rows = []
    for conv in DeltaConvention:
        for cp in grid:
            spectrum = find_bound_states(ModelParams(c_sigma=FIG5_C_SIGMA, c_p=float(cp), delta_convention=conv))
            rows.extend((conv.value, float(cp), i, e) for i, e in enumerate(spectrum.energies))
    return rows


def run_figure(figure: str, convention=DeltaConvention.PAPER_HALF) -> str:
    convention = DeltaConvention(convention)
    if figure == "fig2":
        header, rows = ["c_p", "energy", "transmission"], fig2_rows(convention)
        usable = any(r[2] is not None for r in rows)
    elif figure == "fig3":
        header, rows = ["series", "c_p", "c_sigma", "energy", "transmission"], fig3_rows(convention)
        usable = any(r[4] is not None for r in rows)
    elif figure == "fig4":
        header, rows = ["sweep_value", "level_index", "energy"], fig4_rows(convention)
        usable = bool(rows)
    elif figure == "fig5":
        header, rows = ["convention", "sweep_value", "level_index", "energy"], fig5_rows()
        usable = bool(rows)
    else:
        raise ValueError(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}")
    if not usable:
        raise EmptyDatasetError(f"{figure} produced no data")
    return format_csv(header, rows)
