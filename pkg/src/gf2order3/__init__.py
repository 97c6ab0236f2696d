"""Groups of GF(2)-matrices generated by a class of order-3 elements.

Bit-packed linear algebra, group enumeration, the point-line and spread
geometries of the class, recovery of the invariant forms, and a classifier
that names the group with verifiable evidence.
"""

from __future__ import annotations

from .classifier import ClassificationReport, ClassifyConfig, census, classify, verify_report
from .families import CaseTag, Family, FamilySpec, make_family
from .gf2 import BitMatrix, BitVector, Subspace
from .group import ClassD, GroupClosure, build_class, check_hypotheses, closure

__all__ = [
    "BitMatrix",
    "BitVector",
    "CaseTag",
    "ClassD",
    "ClassificationReport",
    "ClassifyConfig",
    "Family",
    "FamilySpec",
    "GroupClosure",
    "Subspace",
    "build_class",
    "census",
    "check_hypotheses",
    "classify",
    "closure",
    "make_family",
    "verify_report",
]

__version__ = "0.1.0"
