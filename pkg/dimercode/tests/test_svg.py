"""Tests for SVG chart rendering."""

import xml.etree.ElementTree as ET

import numpy as np

from dimercode.models import Sample
from dimercode.tools.statistics import histogram, kde, normal_overlay
from dimercode.ui.svg import render_svg

SVG_NS = "{http://www.w3.org/2000/svg}"


def _figure():
    x = Sample(values=[-1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0])
    hist = histogram(x)
    grid = np.linspace(-3, 4, 71)
    return hist, [("smoothed", kde(x, 0.3, grid)), ("normal", normal_overlay(0.5, 1.0, grid))]


def test_svg_is_well_formed():
    """Test the document parses and holds one bar per bin and one line per curve."""
    hist, curves = _figure()
    root = ET.fromstring(render_svg(hist, curves, title="Counts & density"))

    assert root.tag == f"{SVG_NS}svg"
    assert root.get("viewBox") == "0 0 800 600"
    bars = [r for r in root.iter(f"{SVG_NS}rect") if r.get("class") == "bar"]
    assert len(bars) == hist.counts.size
    polylines = list(root.iter(f"{SVG_NS}polyline"))
    assert len(polylines) == 2
    assert [p.get("stroke") for p in polylines] == ["#2ca02c", "#d62728"]
    assert len(polylines[0].get("points").split()) == 71


def test_svg_is_deterministic():
    """Test equal inputs render byte-identical documents."""
    hist, curves = _figure()
    assert render_svg(hist, curves) == render_svg(hist, curves)


def test_svg_bars_only():
    """Test a chart without curves."""
    hist, _ = _figure()
    text = render_svg(hist)

    assert "<polyline" not in text
    assert text.endswith("</svg>\n")
    ET.fromstring(text)


def test_svg_escapes_labels():
    """Test labels are XML-escaped."""
    hist, curves = _figure()
    text = render_svg(hist, curves, title="a < b", x_label="x & y")
    assert "a &lt; b" in text
    assert "x &amp; y" in text
