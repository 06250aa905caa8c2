"""Simplicial Ricci flow on axisymmetric frustum lattices, with a continuum
warped-product reference solver and a convergence / verification harness."""

from .continuum import ContinuumGrid, grid_from_profile, integrate_continuum
from .errors import ConfigError, FlowStopped, GeometryError
from .flow import FlowConfig, FlowTrajectory, integrate, monitor_waist_bound, velocities
from .frustum import FrustumBlock, block_geometry
from .lattice import LatticeState, build
from . import profiles
from .profiles import RadialProfile

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ContinuumGrid", "FlowConfig", "FlowStopped", "FlowTrajectory", "FrustumBlock",
    "GeometryError", "LatticeState", "RadialProfile", "block_geometry", "build",
    "grid_from_profile", "integrate", "integrate_continuum", "monitor_waist_bound", "profiles",
    "velocities",
]
