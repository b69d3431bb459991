"""Central table of numerical defaults.

Every tolerance, grid size and campaign parameter used by the library and the
command line lives here, so that a report can be reproduced from its embedded
configuration alone.

=========================  ============  =========================================
name                       value         used by
=========================  ============  =========================================
ORDER                      64            truncation order of campaign series
EPS_DIV                    1e-9          series division / log constant-term floor
EPS_ZERO                   1e-8          argument-principle contour safety
SELFMAP_ANGLES             512           self-map certification grid
SELFMAP_MARGIN             1e-6          minimal self-map margin
CERT_RADII                 (0.5, 0.8)    zero-free certification circles
CONTOUR_NODES              512           trapezoidal nodes for the winding number
BNORM_ANGLES               256           initial angular grid of ``b_norm``
BNORM_RADII                64            initial radial grid of ``b_norm``
BNORM_RTOL                 1e-6          refinement stopping rule of ``b_norm``
HP_NODES                   4096          quadrature nodes of ``hp_norm``
HP_RADII                   (0.99, 0.999) diagnostic radii of ``hp_norm``
KOEBE_RADII                (0.99, 0.995, 0.999)  boundary-distance radii
KOEBE_TOL                  1e-3          tolerance of the covering-radius checks
STARTS                     64            optimizer starts per campaign
BUDGET                     20000         evaluations per optimizer start
SEED                       7             default campaign seed
TAU_SAMPLES                100           candidates used to estimate tau(N)
ALPHA_LIMIT_TOL            0.01          ``|alpha(1e-6) - 2/e|`` ceiling (docs/rho_sweep.csv)
=========================  ============  =========================================
"""

ORDER = 64
EPS_DIV = 1e-9
EPS_ZERO = 1e-8

SELFMAP_ANGLES = 512
SELFMAP_MARGIN = 1e-6
CERT_RADII = (0.5, 0.8)
CONTOUR_NODES = 512

BNORM_ANGLES = 256
BNORM_RADII = 64
BNORM_RTOL = 1e-6
BNORM_MAX_REFINE = 4

HP_NODES = 4096
HP_RADII = (0.99, 0.999)

KOEBE_RADII = (0.99, 0.995, 0.999)
KOEBE_TOL = 1e-3

STARTS = 64
BUDGET = 20000
SEED = 7
TAU_SAMPLES = 100

# observed gap at rho = 1e-6 is 0.0062 and decays like 1.2 / log(1/rho)^2
ALPHA_LIMIT_TOL = 0.01

THREADS_ENV = "KRZYZ_LAB_THREADS"
