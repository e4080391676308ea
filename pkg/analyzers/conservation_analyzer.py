"""Energy, speed, flux and mirror-symmetry checks on run statistics"""
from config.thresholds import (
    ENERGY_RESIDUAL_TOLERANCE,
    FLUX_DRIFT_TOLERANCE,
    MIRROR_TOLERANCE,
    SPEED_DRIFT_TOLERANCE,
)


class ConservationAnalyzer:
    """Analyzes the per-run maxima collected by run_scenario"""

    CHECKS = {
        "energy": ("max_energy_residual", ENERGY_RESIDUAL_TOLERANCE),
        "speed": ("max_speed_drift", SPEED_DRIFT_TOLERANCE),
        "flux": ("max_flux_drift", FLUX_DRIFT_TOLERANCE),
        "mirror": ("max_mirror_asymmetry", MIRROR_TOLERANCE),
    }

    @staticmethod
    def analyze(bundle):
        """
        Analyze conservation laws over a whole run

        Speed is only checked in free space (V = 0 or n = 1); an external
        force changes |p| legitimately.

        Returns:
            dict: {
                "status": "OK|CRITICAL|NOT_APPLICABLE",
                "failed": [check names],
                "details": {name: {"value": float, "threshold": float, "status": str}}
            }
        """
        stats = bundle.stats
        if not stats:
            return {"status": "NOT_APPLICABLE", "failed": [], "details": {}}

        free_space = bundle.echo.get("potential", "free") == "free"
        symmetric = bundle.scenario in ("gaussian", "single_slit", "double_slit") and free_space

        details = {}
        failed = []
        for name, (key, threshold) in ConservationAnalyzer.CHECKS.items():
            if key not in stats:
                continue
            if (name == "speed" and not free_space) or (name == "mirror" and not symmetric):
                details[name] = {"value": stats[key], "threshold": threshold,
                                 "status": "NOT_APPLICABLE"}
                continue
            status = "OK" if stats[key] <= threshold else "CRITICAL"
            if status != "OK":
                failed.append(name)
            details[name] = {"value": stats[key], "threshold": threshold, "status": status}

        if stats.get("caustic_warnings"):
            details["caustic_warnings"] = stats["caustic_warnings"]

        return {
            "status": "CRITICAL" if failed else "OK",
            "failed": failed,
            "details": details,
        }
