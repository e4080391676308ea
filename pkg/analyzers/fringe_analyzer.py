"""Far-field fringe spacing of double-slit runs"""
import numpy as np
from scipy.ndimage import gaussian_filter1d
from scipy.signal import find_peaks

from config.thresholds import FRINGE_PROMINENCE, FRINGE_TOLERANCE
from models.errors import FringeError
from scenarios.reference import fraunhofer_spacing

_MIN_PEAKS = 3
_SMOOTHING_BINS = 1.0


def screen_positions(bundle, z_screen):
    """x of every ray where it crosses z = z_screen, interpolated between snapshots"""
    paths = bundle.paths()
    z, x = paths["z"], paths["x"]
    if not (z_screen >= z[0].max() and z_screen <= z[-1].min()):
        raise ValueError(f"z_screen={z_screen:.6g} outside the range every ray covers "
                         f"[{z[0].max():.6g}, {z[-1].min():.6g}]")
    return np.array([np.interp(z_screen, z[:, i], x[:, i]) for i in range(bundle.n_rays)])


def screen_histogram(bundle, z_screen, bins=None):
    """
    Launch-flux weighted ray density on the screen

    Returns:
        tuple: (bin centres, smoothed density)
    """
    if bundle.launch_flux is None:
        raise ValueError("bundle has no launch flux to weight the histogram")
    x = screen_positions(bundle, z_screen)
    weights = bundle.launch_flux
    carrying = weights > 1e-12 * weights.max()
    span = (x[carrying].min(), x[carrying].max())
    bins = bins or max(50, bundle.n_rays // 4)

    density, edges = np.histogram(x[carrying], bins=bins, range=span, weights=weights[carrying])
    density = gaussian_filter1d(density.astype(float), _SMOOTHING_BINS, mode="constant")
    return 0.5 * (edges[:-1] + edges[1:]), density


def fringe_spacing(bundle, z_screen, bins=None):
    """
    Mean distance between adjacent intensity maxima on the screen

    Raises:
        FringeError: not a double-slit run, or fewer than three maxima
    """
    if bundle.scenario != "double_slit":
        raise FringeError(f"{bundle.scenario} run has no periodic fringes")
    centres, density = screen_histogram(bundle, z_screen, bins)
    peaks, _ = find_peaks(density, prominence=FRINGE_PROMINENCE * density.max())
    if len(peaks) < _MIN_PEAKS:
        raise FringeError(f"found {len(peaks)} resolvable maxima at z={z_screen:.6g}, "
                          f"need {_MIN_PEAKS}")
    return float(np.mean(np.diff(centres[peaks])))


class FringeAnalyzer:
    """Compares the measured spacing with the Fraunhofer two-slit law"""

    TOLERANCE = FRINGE_TOLERANCE

    @staticmethod
    def analyze(bundle, u, z_screen=None):
        """
        Analyze fringe spacing at z_screen (default: the furthest common z)

        Returns:
            dict: {
                "status": "OK|WARNING|CRITICAL|NOT_APPLICABLE",
                "spacing": float | None,
                "details": {...}
            }
        """
        if bundle.scenario != "double_slit":
            return {"status": "NOT_APPLICABLE", "spacing": None, "details": {}}

        if z_screen is None:
            z_screen = float(bundle.snapshots[-1].z.min())
        separation = bundle.echo.get("slit_separation")
        expected = fraunhofer_spacing(z_screen, separation * u.w0, u) if separation else None
        try:
            spacing = fringe_spacing(bundle, z_screen)
        except FringeError as exc:
            # Near field: the slits have not interfered yet
            return {
                "status": "WARNING",
                "spacing": None,
                "details": {"z_screen": z_screen, "expected": expected, "error": str(exc)},
            }

        relative = None if expected is None else abs(spacing - expected) / expected
        status = "OK" if relative is None or relative <= FringeAnalyzer.TOLERANCE else "CRITICAL"
        return {
            "status": status,
            "spacing": spacing,
            "details": {
                "z_screen": z_screen,
                "expected": expected,
                "relative_error": relative,
                "threshold": FringeAnalyzer.TOLERANCE,
            },
        }
