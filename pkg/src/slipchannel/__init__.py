"""Fluid flow through a channel with a compliant viscoelastic top wall.

Two-dimensional incompressible Navier-Stokes flow with Navier slip, coupled
to a clamped plate, solved on a stretched staggered grid with a penalized
outlet flux. The package also carries an energy ledger and the analytic test
functions used to diagnose finite-time contact.
"""
from .config import (ConfigError, PhysicalParams, PressureData, SimulationConfig,
                     ValidatedConfig, load_config, parse_config, pressure_eval,
                     serialize_config, validate_config)
from .geometry import AleMap, build_map, curvature, h3_seminorm, interface_frame
from .plate import StructureState, plate_step
from .fluid import FluidState, boundary_fluxes, fluid_step, interface_traction
from .energy import EnergyRecord, ledger_audit
from .coupling import RunResult, detect_contact, lie_trotter_step, run_simulation
from .testpairs import (contact_testpair, contradiction_diagnostic, regularity_diagnostic,
                        regularity_testpair, weakform_terms)

__all__ = [
    "ConfigError", "PhysicalParams", "PressureData", "SimulationConfig", "ValidatedConfig",
    "load_config", "parse_config", "pressure_eval", "serialize_config", "validate_config",
    "AleMap", "build_map", "curvature", "h3_seminorm", "interface_frame",
    "StructureState", "plate_step",
    "FluidState", "boundary_fluxes", "fluid_step", "interface_traction",
    "EnergyRecord", "ledger_audit",
    "RunResult", "detect_contact", "lie_trotter_step", "run_simulation",
    "contact_testpair", "contradiction_diagnostic", "regularity_diagnostic",
    "regularity_testpair", "weakform_terms",
]

__version__ = "0.1.0"
