"""Simulation toolkit for the thermodynamic cost of oracle-based computation.

The package couples a small dense quantum simulator with an explicit
finite-step erasure protocol and an itemized energy ledger, so that every
energy-consumption and query-complexity bound it ships can be checked against
simulated runs rather than taken on faith.
"""

from __future__ import annotations

__version__ = "0.1.0"
