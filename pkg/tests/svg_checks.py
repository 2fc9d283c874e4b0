"""Structural SVG assertions shared by figure tests."""

from __future__ import annotations

import xml.etree.ElementTree as ET

SVG_NS = "{http://www.w3.org/2000/svg}"


def parse_svg(text: str) -> ET.Element:
    """Parse and check SVG 1.1 structure: well-formed, svg root, viewBox."""
    root = ET.fromstring(text)
    assert root.tag == f"{SVG_NS}svg"
    assert "viewBox" in root.attrib
    return root


def count_rects(root: ET.Element) -> int:
    return sum(1 for _ in root.iter(f"{SVG_NS}rect"))


def by_class(root: ET.Element, tag: str, cls: str) -> list[ET.Element]:
    return [
        el for el in root.iter(f"{SVG_NS}{tag}") if cls in el.get("class", "").split()
    ]
