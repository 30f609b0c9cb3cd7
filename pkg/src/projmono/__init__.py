"""Deciding and realizing monodromy of meromorphic projective structures.

Given a representation of a punctured-surface group into PSL(2, C), this
package decides whether it occurs as the monodromy of a projective structure
whose quadratic differential has poles of order at most two, and for the
degenerate families constructs an explicit planar polygonal complex with
Moebius side pairings realizing it, plus an independent verifier.
"""

__version__ = "0.1.0"
