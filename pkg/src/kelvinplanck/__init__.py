"""Exact second-law decisions for finitely generated process cones."""
from .cdsynth import Compliant, Violating, check_kp
from .cone import member, query
from .core import CDPair, ProcessVector, SignedMeasure, StateSpace, Theory, TheoryError, make_theory
from .fixtures import builtin

__all__ = ["CDPair", "Compliant", "ProcessVector", "SignedMeasure", "StateSpace", "Theory", "TheoryError",
           "Violating", "builtin", "check_kp", "make_theory", "member", "query"]
