"""Surfaces with a canonical principal direction in Minkowski 3-space.

Modules: :mod:`lorentz` (E^3_1 algebra), :mod:`jets` (2-jet derivatives),
:mod:`geometry` (fundamental forms, shape operator), :mod:`cpd` (the CPD
verifier), :mod:`catalog` and :mod:`presets` (surface families),
:mod:`suite` and :mod:`cli` (acceptance checks and command line).
"""
__version__ = "0.1.0"
