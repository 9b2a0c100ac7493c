"""Invariants of signed chord diagrams, Gauss diagrams and twisted diagrams.

Kauffman bracket and Jones polynomial, orientability of chord diagrams,
Carter surfaces, integer Khovanov homology, Reidemeister moves and
exhaustive enumeration of small diagrams.
"""

from __future__ import annotations

from chordknot.bracket import jones_f, kauffman_bracket, mod4_class
from chordknot.codec import canonicalize, parse, serialize
from chordknot.core import (
    GaussDiagram,
    SignedChordDiagram,
    State,
    TwistedGaussDiagram,
    blunt,
    forget_marks,
    resolve,
    validate,
)
from chordknot.orientation import find_orientation, is_orientable, obstruction
from chordknot.poly import LaurentPoly

__all__ = [
    "GaussDiagram",
    "LaurentPoly",
    "SignedChordDiagram",
    "State",
    "TwistedGaussDiagram",
    "blunt",
    "canonicalize",
    "find_orientation",
    "forget_marks",
    "is_orientable",
    "jones_f",
    "kauffman_bracket",
    "mod4_class",
    "obstruction",
    "parse",
    "resolve",
    "serialize",
    "validate",
]

__version__ = "0.1.0"
