"""Command line surface for qspec_core: reads matrix files, writes JSON and CSV reports."""

__version__ = "0.1.0"
