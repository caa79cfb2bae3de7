"""DimerCode: coloured hard-dimer combinatorics and sampling."""

__version__ = "0.1.0"
