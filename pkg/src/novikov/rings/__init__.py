"""Coefficient rings and their elements."""

from .ground import INTEGERS, LAURENT, QQ, RATIONALS, ZZ, GroundElement, GroundRing
from .ratfun import QZ, RationalFunction, RationalFunctionField, ratfun_to_series
from .series import NovikovSeries, SeriesRing, parse_series
from .twisted import TwistedElement, TwistedRing, twisted_mul

__all__ = [
    "INTEGERS", "RATIONALS", "LAURENT", "ZZ", "QQ", "QZ",
    "GroundRing", "GroundElement", "TwistedRing", "TwistedElement", "twisted_mul",
    "SeriesRing", "NovikovSeries", "parse_series",
    "RationalFunctionField", "RationalFunction", "ratfun_to_series",
]
