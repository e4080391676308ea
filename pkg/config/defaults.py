"""Default run parameters"""

# Scenario
SCENARIO = "gaussian"
N_RAYS = 201  # Odd, so one ray sits on the axis
HALF_WIDTH = 4.0  # Front truncation, in w0
Z_MAX_RAYLEIGH = 3.0  # Run length, in Rayleigh lengths
REGIME = "nonrelativistic"
SNAPSHOT_EVERY = 10  # Steps between stored snapshots

# Units
LAMBDA0_OVER_W0 = 2e-4
PC_OVER_REST_ENERGY = 0.1
REST_MASS = 1.0  # 0 selects massless relativistic particles

# Slits (lengths in w0)
SLIT_WIDTH = 2.0
SLIT_SEPARATION = 8.0
EDGE_ORDER = 8  # Super-Gaussian exponent of the slit edges

# Output
OUTPUT_DIR = "runs/latest"
EMIT_SVG = True
TRAJECTORY_FILE = "trajectories.csv"
BOHM_FILE = "bohm_trajectories.csv"
FIGURE_FILE = "figure.svg"
SUMMARY_FILE = "run_summary.json"
REPORT_FILE = "run_report.txt"
MAX_WORKERS = 2

# Comparator (1D box centered on x = 0)
COMPARATOR_ENABLED = False
COMPARATOR_POINTS = 1601
COMPARATOR_BOX_LENGTH = 80.0
COMPARATOR_STATE = "packet"  # packet | mode | superposition | double_slit
COMPARATOR_SIGMA0 = 1.0
COMPARATOR_K0 = 1.0
COMPARATOR_X0 = 0.0
COMPARATOR_MODES = (1, 2)
COMPARATOR_DT = 0.002
COMPARATOR_STEPS = 1000
COMPARATOR_SEEDS = 9
