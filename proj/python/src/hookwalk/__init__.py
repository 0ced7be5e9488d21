"""Transition measures of continual Young diagrams and their hook walks."""

import json as _json

from ._core import (
    Diagram as _Diagram,
    cauchy_identity,
    density,
    density_grid,
    density_mass,
    exterior_atoms,
    g_from_p,
    h_from_p,
    interior_atoms,
    invert_density,
    ks_distance,
    limit_curve,
    p_from_h,
    p_moments,
    rect_from_exterior_atoms,
    rect_from_interior_atoms,
    root_fractional_parts,
    simulate,
)

Diagram = _Diagram


def diagram(spec):
    """Diagram from a spec dict or a JSON string."""
    if isinstance(spec, Diagram):
        return spec
    if not isinstance(spec, str):
        spec = _json.dumps(spec)
    return Diagram(spec)


__all__ = [
    "Diagram",
    "cauchy_identity",
    "density",
    "density_grid",
    "density_mass",
    "diagram",
    "exterior_atoms",
    "g_from_p",
    "h_from_p",
    "interior_atoms",
    "invert_density",
    "ks_distance",
    "limit_curve",
    "p_from_h",
    "p_moments",
    "rect_from_exterior_atoms",
    "rect_from_interior_atoms",
    "root_fractional_parts",
    "simulate",
]
