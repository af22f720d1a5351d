import os

ARTIFACT_VERSION = "1.0.0"
OUTPUT_ROOT = os.path.join(os.getcwd(), "output")
WORKERS_ENV = "KINLAB_WORKERS"

# Kinetic algebra
DEGENERACY_THRESHOLD = 1e-13
# relative to |u|; well inside the 1e-12 absolute target for |u| <= 1e3
ROOT_XTOL = 1e-15
ROOT_RTOL = 4 * 2.220446049250313e-16
ROOT_MAXITER = 200
BRACKET_EXPANSIONS = 60
FD_CHECK_STEP = 1e-4
VALIDATION_UMAX = 4.0
VALIDATION_POINTS = 120
KINETIC_TOL = 1e-12

# Riemann solver
SPEED_TOL = 1e-12
RH_TOL = 1e-12
DISSIPATION_TOL = 1e-12

# Traveling waves
LAUNCH_OFFSET = 1e-7
TW_RTOL = 1e-10
TW_ATOL = 1e-12
TW_BUDGET = 1e4
# switch to LSODA once alpha^2 exceeds this multiple of h'(u_minus)
TW_STIFF_RATIO = 100.0
DAMPING_EPS = 1e-12
SADDLE_TOL = 1e-9
# closest approach to the far saddle, relative to |u_minus|, accepted as a connection
CONNECT_TOL = 1e-4
MIDDLE_TOL = 1e-8
GRAZE_TOL = 1e-9
LAMBDA_EDGE = 1e-10
LAMBDA_WIDTH = 1e-12
LAMBDA_MAXITER = 200
ALPHA_RANGE = (1e-4, 1e4)
ALPHA_RTOL = 1e-6

# Front tracking
FRONT_MIN_STRENGTH = 1e-13
COLLISION_WINDOW = 1e-12
INTERACTION_BUDGET = 10**6
FAN_STEP_FACTOR = 0.01
STRENGTH_SAMPLES = 24
BOUND_RTOL = 1e-9

# Finite differences
CFL_DEFAULT = 0.4
PARABOLIC_FACTOR = 0.5
DISPERSIVE_FACTOR = 0.6
GAUSS_POINTS = 16

# Plateau detection
FLAT_SLOPE = 1e-3
OSCILLATION_BUFFER = 10
MIN_FLAT_WINDOW = 5
MIN_TABLE_ROWS = 3
# position of the scheme far state between phi_flat and phi_sharp
FAR_STATE_WEIGHT = 0.25
# intermediate states of two regularizations must differ by this multiple of the plateau noise
WITNESS_FACTOR = 10.0
WITNESS_NOISE_FLOOR = 1e-4
