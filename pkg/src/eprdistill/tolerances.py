"""Central numeric tolerance constants.

Every invariant threshold used by the library lives here so that tests and
callers agree on one set of defaults.  All values are absolute tolerances
unless noted otherwise.
"""

# Max elementwise |rho - rho^dag| accepted when constructing a density matrix.
HERMITICITY_ATOL = 1e-12

# Density-matrix eigenvalues may undershoot zero by at most this much.
EIGENVALUE_FLOOR = -1e-10

# Trace of a density matrix must lie in (0, 1 + TRACE_UPPER_SLACK].
TRACE_UPPER_SLACK = 1e-12

# Unitaries must satisfy max |U^dag U - I| <= UNITARITY_ATOL.
UNITARITY_ATOL = 1e-10

# Trace preservation required from unitary conjugation.
TRACE_PRESERVATION_ATOL = 1e-12

# Heralding branches with probability at or below this are treated as
# impossible (conditioning on them is meaningless).
HERALD_MIN_PROBABILITY = 1e-14

# First moments <X>, <P> must vanish to this level before second moments are
# trusted; a violation signals a circuit bug upstream.
FIRST_MOMENT_ATOL = 1e-9

# Internal consistency of derived sum/difference variances.
VARIANCE_CONSISTENCY_ATOL = 1e-12

# Cauchy-Schwarz slack allowed on cross moments.
CROSS_MOMENT_SLACK = 1e-9

# Round-trip accuracy demanded from the equivalent-state solver.
EQUIV_SOLVER_ATOL = 1e-9
