"""Search for ribbon structure in knot diagrams by random band attachment."""

__version__ = "0.1.0"

from .diagram import (
    BraidWord,
    Crossing,
    LinkDiagram,
    from_braid,
    parse_pd,
    serialize_pd,
)

__all__ = [
    "BraidWord",
    "Crossing",
    "LinkDiagram",
    "from_braid",
    "parse_pd",
    "serialize_pd",
]
