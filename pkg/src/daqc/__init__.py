"""Digital-analog schedule compiler for two-body Hamiltonians on ZZ hardware."""

__version__ = "0.1.0"
