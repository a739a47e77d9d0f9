"""Default numerical tolerances.

All comparisons in the package take an explicit tolerance; these are the
defaults used when the caller does not pass one.
"""

ATOL = 1e-9            # coefficientwise equality of loops
UNIT_CIRCLE_TOL = 1e-12  # |z| - 1 allowed for evaluation points
UNITARY_TOL = 1e-9     # pointwise g*g - I residual
TAIL_TOL = 1e-10       # truncated exponential tail bound
SECTION_TOL = 1e-8     # section-doubling convergence for non-polynomial symbols
DEFAULT_SAMPLES = 64   # circle sampling count for residual checks
