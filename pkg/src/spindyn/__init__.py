"""spindyn: numerical laboratory for classical and quantum spinning-electron dynamics.

Subpackages cover nonrelativistic spin precession with an alignment
interaction, Poisson-bracket machinery for spin phase space, relativistic
acceleration scaling, spinning bodies in Schwarzschild spacetime, and
machine-precision checks of the positive-energy quantum operator algebra.
"""

__version__ = "0.1.0"
