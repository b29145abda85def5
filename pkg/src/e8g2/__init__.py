"""Exact computational toolkit for the E8 root system, its Weyl group
combinatorics relative to two commuting parabolic directions, Chevalley-basis
unipotent calculus, G2 character theory, and the zeta-product identities that
tie them together.

Everything is exact (integers and Laurent polynomials); nothing here uses
floating point.
"""

__version__ = "0.1.0"
