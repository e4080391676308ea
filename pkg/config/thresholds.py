"""Numerical guards and acceptance tolerances"""

# Wavefront
INTENSITY_FLOOR = 1e-8  # Launch R^2, share of the peak, below which a ray is a flux-free tracer
MIN_RAYS_LAPLACIAN = 5  # Rays a lit segment needs before it sets the Wave Potential
EDGE_RAYS = 3  # Rays at each end of a lit segment that take Q from the end fit
FIT_RAYS = 8  # Centered values behind each end fit
CAUSTIC_WARNING_FRACTION = 0.1  # Gap below this share of the median gap raises caustic_flag

# Time stepping
TRANSVERSE_STEP_FACTOR = 0.1  # Relative neighbour motion per step, in units of the gap
LONGITUDINAL_STEP_FACTOR = 1e-3  # Longitudinal advance per step, in Rayleigh lengths
COUPLING_STEP_FACTOR = 1.0  # dt * sqrt(coupling) * D / gap^2, D the wave diffusivity
STEP_SAFETY = 0.9  # Share of the launch limit used when dt is chosen automatically
STEP_RULE_SLACK = 1e-6  # Relative allowance when re-checking the rule during a run
ENERGY_DRIFT_HARD_LIMIT = 1e-3  # max |H-E|/E that aborts a run
MAX_STEPS = 10_000_000  # Runaway guard

# Comparator
NODE_FLOOR = 1e-6  # Fraction of max|psi| treated as a node
ESCAPE_PROBABILITY = 1e-6  # Probability allowed in the boundary strips
ESCAPE_EDGE_FRACTION = 0.05  # Width of each boundary strip, share of the box
MIN_GRID_POINTS = 64
MIN_POINTS_PER_WAVELENGTH = 8
MAX_PHASE_PER_STEP = 0.1  # dt * max|V| / hbar
RESOLUTION_AMPLITUDE_FRACTION = 0.1  # Only points above this share of max|psi| set the local wavenumber
MADELUNG_WINDOW = 1e-2  # Residuals are evaluated where |psi| exceeds this share of max|psi|
MIN_WINDOW_SHARE = 0.02  # Window must hold at least this share of the grid
NORM_DRIFT_PER_STEP = 1e-12

# Validation
WAIST_TOLERANCE = 0.01  # Relative x error against the waist line
ENERGY_RESIDUAL_TOLERANCE = 1e-6
SPEED_DRIFT_TOLERANCE = 1e-8
FLUX_DRIFT_TOLERANCE = 1e-12
MIRROR_TOLERANCE = 1e-8  # In units of w0
FRINGE_TOLERANCE = 0.05  # Relative to the Fraunhofer spacing
FRINGE_PROMINENCE = 0.3  # Peak prominence, share of the histogram maximum
UNCERTAINTY_RATIO_RANGE = (1.8, 2.2)
NORM_TOLERANCE = 1e-8
