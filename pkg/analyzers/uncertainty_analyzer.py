"""Position-momentum uncertainty product along a run"""
import numpy as np

from config.thresholds import UNCERTAINTY_RATIO_RANGE
from engine.wavefront import tube_widths
from models.errors import DegenerateFrontError
from models.units import rayleigh_length


def uncertainty_product(front, u):
    """
    Delta x Delta p_x / hbar over one front

    Both spreads are standard deviations weighted by R^2 ds, the share of
    the beam each ray tube carries; dark rays carry none.
    """
    if not front.lit.any():
        raise DegenerateFrontError("no ray carries flux")
    weights = front.R ** 2 * tube_widths(front)

    mean_x = np.average(front.x, weights=weights)
    mean_p = np.average(front.px, weights=weights)
    spread_x = np.sqrt(np.average((front.x - mean_x) ** 2, weights=weights))
    spread_p = np.sqrt(np.average((front.px - mean_p) ** 2, weights=weights))
    return float(spread_x * spread_p / u.hbar)


def product_history(bundle, u):
    """
    Uncertainty product at every snapshot

    Returns:
        tuple: (z of the central ray in Rayleigh lengths, products)
    """
    centre = bundle.n_rays // 2
    z = np.array([front.z[centre] for front in bundle.snapshots]) / rayleigh_length(u)
    products = np.array([uncertainty_product(front, u) for front in bundle.snapshots])
    return z, products


class UncertaintyAnalyzer:
    """Checks that the product grows linearly far from the launch plane"""

    RATIO_RANGE = UNCERTAINTY_RATIO_RANGE  # product(3 z_R) / product(1.5 z_R)
    FAR_FIELD = 2.5  # Rayleigh lengths beyond which the product must reach 1

    @staticmethod
    def analyze(bundle, u):
        """
        Analyze the uncertainty product of a Gaussian run

        Returns:
            dict: {
                "status": "OK|WARNING|CRITICAL|NOT_APPLICABLE",
                "launch_product": float,
                "final_product": float,
                "details": {...}
            }
        """
        if bundle.scenario != "gaussian" or len(bundle) < 2:
            return {"status": "NOT_APPLICABLE", "launch_product": None,
                    "final_product": None, "details": {}}

        z, products = product_history(bundle, u)
        monotone = bool(np.all(np.diff(products) >= -1e-12 * products.max()))
        far = z >= UncertaintyAnalyzer.FAR_FIELD
        far_ok = bool(np.all(products[far] >= 1.0)) if far.any() else None

        ratio = None
        if z[-1] >= 3.0 * (1.0 - 1e-6):
            ratio = float(np.interp(3.0, z, products) / np.interp(1.5, z, products))
        low, high = UncertaintyAnalyzer.RATIO_RANGE
        ratio_ok = None if ratio is None else low <= ratio <= high

        checks = [products[0] < 1.0, monotone, far_ok, ratio_ok]
        if any(check is False for check in checks):
            status = "CRITICAL"
        elif any(check is None for check in checks):
            # Run too short for the far-field checks
            status = "WARNING"
        else:
            status = "OK"

        return {
            "status": status,
            "launch_product": float(products[0]),
            "final_product": float(products[-1]),
            "details": {
                "non_decreasing": monotone,
                "far_field_at_least_one": far_ok,
                "ratio_3_over_1_5": ratio,
                "ratio_range": list(UncertaintyAnalyzer.RATIO_RANGE),
            },
        }
