"""Spin drift-diffusion simulator.

`run`, `sweep` and `equilibrium` take a preset name or the text of a
key = value config, plus optional key overrides, e.g.

    spindd.run("spin_decay", overrides={"stepper.t_end": 0.01, "samples": "0, 0.01"})
"""

from ._core import (
    ConfigError,
    SolverError,
    ValidityError,
    equilibrium,
    format_config,
    phi,
    polarization_sandwich,
    preset_names,
    run,
    spin_mobility,
    sweep,
)

__all__ = [
    "ConfigError",
    "SolverError",
    "ValidityError",
    "equilibrium",
    "format_config",
    "phi",
    "polarization_sandwich",
    "preset_names",
    "run",
    "spin_mobility",
    "sweep",
]
