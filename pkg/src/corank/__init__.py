"""Co-rank obstruction toolkit for surface automorphisms and 3-manifold groups.

Exact free-group word algebra, Dehn-twist actions on the genus-2 surface
group, symplectic quadratic forms over GF(2) with twist obstruction
certificates, Smith-normal-form Betti numbers, and a complete case analysis
of the parametric word problem behind the rank-two epimorphism obstruction.
"""

__version__ = "0.1.0"
