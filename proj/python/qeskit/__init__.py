"""Python surface of the qeskit core: catalog access, model builds,
finite-difference verification, and the closed chain potentials."""

from _qeskit import (
    build,
    catalog_defaults,
    catalog_names,
    evaluate_expression,
    morse_chain_potential,
    oscillator_base_potential,
    oscillator_chain_potential,
    schema_version,
    verify,
)

__all__ = [
    "build",
    "catalog_defaults",
    "catalog_names",
    "evaluate_expression",
    "morse_chain_potential",
    "oscillator_base_potential",
    "oscillator_chain_potential",
    "schema_version",
    "verify",
]
