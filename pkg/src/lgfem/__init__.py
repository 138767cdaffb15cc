"""Lagrange-Galerkin transport solver on triangle meshes.

Semi-Lagrangian advection of a scalar by a divergence-free velocity field:
each step traces quadrature points back along characteristics, interpolates
the previous solution there, and L2-projects onto the finite element space.
Two stabilized variants are included: local projection stabilization (LPS)
and residual-driven discontinuity capturing (DC).
"""

__version__ = "0.1.0"
