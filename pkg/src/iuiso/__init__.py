"""Normalization and isomorphism of intersection/union types, with
invertible lambda-term witnesses and a typing-derivation checker."""

__version__ = "0.1.0"
