"""Discrete-event simulator of a blockchain-enabled network, instrumented to
measure the Age of Information of a tracked ledger key."""

from .core import ConfigError, SimulationError

__all__ = ["ConfigError", "SimulationError"]
