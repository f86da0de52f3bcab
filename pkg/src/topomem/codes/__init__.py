"""Builders for the four CSS code families and their shared checks."""

from .base import (
    BOUNDARY,
    CheckMatrixFile,
    CssCode,
    LogicalPair,
    SectorGraph,
    ValidationReport,
    export_code,
    import_code,
    validate,
)
from .haah import build_haah, haah_size_allowed
from .holes import build_planar_holes, default_holes
from .subsystem import build_subsystem, gauge_logical_count, virtual_lattice
from .toric import build_toric

FAMILIES = ("toric", "planar_holes", "subsystem", "haah")


def build_code(family: str, L: int, **options) -> CssCode:
    """Dispatch on the family name used by the CLI and export headers."""
    family = family.replace("-", "_")
    if family == "toric":
        return build_toric(L)
    if family in ("planar_holes", "holes"):
        return build_planar_holes(L, options.get("holes"))
    if family == "subsystem":
        return build_subsystem(L)
    if family == "haah":
        return build_haah(L)
    raise ValueError(f"unknown code family {family!r}; choose from {', '.join(FAMILIES)}")


__all__ = [
    "BOUNDARY",
    "FAMILIES",
    "CheckMatrixFile",
    "CssCode",
    "LogicalPair",
    "SectorGraph",
    "ValidationReport",
    "build_code",
    "build_haah",
    "build_planar_holes",
    "build_subsystem",
    "build_toric",
    "default_holes",
    "export_code",
    "gauge_logical_count",
    "haah_size_allowed",
    "import_code",
    "validate",
    "virtual_lattice",
]
