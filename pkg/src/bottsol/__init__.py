"""Exact symbolic checker for the affine Ricci soliton classification of
Bott-type connections on three-dimensional Lorentzian Lie groups.

Everything is computed over a fixed parameter alphabet with exact rational
coefficients: structure constants to connections to curvature to the affine
soliton systems, plus a verification harness that compares each stage with
the stored reference tables and checks every classification theorem.
"""

__version__ = "0.1.0"
