"""Exact construction of explicit isomorphisms A -> M_n(F_q(x)).

Given a structure-constant algebra promised isomorphic to a full matrix
algebra over the rational function field, this package builds a maximal
F_q[x]-order, an order maximal at the prime 1/x, intersects them into a
finite algebra, extracts a rank-1 idempotent from that intersection, and
returns the isomorphism defined by the action on the resulting minimal
left ideal, verified exactly on every basis product.
"""

__version__ = "0.1.0"
