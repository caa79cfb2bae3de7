"""Terminal display helpers and the SVG chart renderer."""

from dimercode.ui import display, svg

__all__ = ["display", "svg"]
