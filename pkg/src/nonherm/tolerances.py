"""Central numeric tolerance table.

Every validation threshold used by the library lives here so tests and
implementation stay calibrated against a single source.
"""

# matrix symmetry / spectral checks
HERMITIAN_ATOL = 1e-10          # max |m - m^dag| entrywise
PSD_EIGEN_FLOOR = -1e-10        # eigenvalues below this raise NotPSD
DENSITY_EIGEN_FLOOR = -1e-9     # density matrices may be slightly rounded
SQRT_RESIDUAL_ATOL = 1e-8       # ||S*S - m||_max for psd_sqrt

# Jacobi eigensolver
JACOBI_OFF_TOL = 1e-12          # off-diagonal Frobenius norm at convergence
JACOBI_MAX_SWEEPS = 100

# state vectors / density matrices
STATE_NORM_ATOL = 1e-10
TRACE_ATOL = 1e-10
UNITARY_ATOL = 1e-10

# postselection / renormalized evolution
ZERO_PROBABILITY_FLOOR = 1e-14
VANISHING_NORM_FLOOR = 1e-14

# exceptional-point detection: |omega| == gamma up to this relative scale
EP_RTOL = 1e-12
