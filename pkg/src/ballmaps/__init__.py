"""Exact toolkit for proper monomial maps between generalized balls and the
holomorphic maps they induce between type-I matrix domains."""

from .exactnum import (
    DomainError,
    Rational,
    Surd,
    SurdSum,
    UnsupportedExtensionError,
    parse_surdsum,
    surd_normalize,
)

__all__ = [
    "DomainError",
    "Rational",
    "Surd",
    "SurdSum",
    "UnsupportedExtensionError",
    "parse_surdsum",
    "surd_normalize",
]
