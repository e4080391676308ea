"""Gaussian waist-line analyzer"""
import numpy as np

from config.thresholds import WAIST_TOLERANCE
from models.units import make_unit_system, rayleigh_length
from scenarios.reference import paraxial_ray_family


def bundle_units(bundle):
    """UnitSystem of a bundle, rebuilt from its echo when it came from a CSV"""
    if bundle.units is not None:
        return bundle.units
    echo = bundle.echo
    if "lambda0_over_w0" not in echo:
        raise ValueError("bundle carries neither units nor lambda0_over_w0")
    return make_unit_system(
        echo["lambda0_over_w0"],
        echo.get("regime", "nonrelativistic"),
        echo.get("pc_over_rest_energy"),
        rest_mass=echo.get("rest_mass", 1.0),
    )


class WaistLineAnalyzer:
    """Compares the rays launched at +-w0 with the Gaussian waist line"""

    TOLERANCE = WAIST_TOLERANCE  # Relative x error
    Z_RANGE = 3.0  # Compared up to this many Rayleigh lengths

    @staticmethod
    def waist_rays(front, u):
        """Indices of the rays launched closest to -w0 and +w0"""
        left = int(np.argmin(np.abs(front.x + u.w0)))
        right = int(np.argmin(np.abs(front.x - u.w0)))
        return left, right

    @staticmethod
    def max_relative_error(bundle, u=None):
        """
        Largest |x_sim - x_ref| / |x_ref| over z in [0, 3 z_R] for the waist rays

        x_ref follows the paraxial family from each ray's own launch point, so
        a ray that sits a rounding error off +-w0 is not penalized for it.
        """
        u = u or bundle_units(bundle)
        paths = bundle.paths()
        launch = bundle.snapshots[0]
        z_limit = WaistLineAnalyzer.Z_RANGE * rayleigh_length(u) * (1.0 + 1e-9)

        worst = 0.0
        for index in WaistLineAnalyzer.waist_rays(launch, u):
            x0 = launch.x[index]
            z = paths["z"][:, index]
            x = paths["x"][:, index]
            keep = z <= z_limit
            x_ref, _ = paraxial_ray_family(x0, z[keep], u)
            error = np.abs(x[keep] - x_ref) / np.abs(x_ref)
            worst = max(worst, float(error.max()))
        return worst

    @staticmethod
    def analyze(bundle, u=None):
        """
        Analyze waist-line agreement of a Gaussian run

        Returns:
            dict: {
                "status": "OK|CRITICAL|NOT_APPLICABLE",
                "max_relative_error": float | None,
                "details": {...}
            }
        """
        if bundle.scenario != "gaussian" or len(bundle) < 2:
            return {
                "status": "NOT_APPLICABLE",
                "max_relative_error": None,
                "details": {"reason": f"{bundle.scenario} run with {len(bundle)} snapshots"},
            }

        u = u or bundle_units(bundle)
        error = WaistLineAnalyzer.max_relative_error(bundle, u)
        z_reached = float(bundle.snapshots[-1].z.max()) / rayleigh_length(u)
        return {
            "status": "OK" if error <= WaistLineAnalyzer.TOLERANCE else "CRITICAL",
            "max_relative_error": error,
            "details": {
                "threshold": WaistLineAnalyzer.TOLERANCE,
                "z_reached_rayleigh": z_reached,
                "rays": list(WaistLineAnalyzer.waist_rays(bundle.snapshots[0], u)),
            },
        }
