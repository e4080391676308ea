"""Comparator diagnostics analyzer"""
from config.thresholds import NORM_TOLERANCE

SPREAD_TOLERANCE = 0.01  # Relative, against the free-packet law
ENERGY_TOLERANCE = 1e-6  # Relative drift of <H>
RESIDUAL_TOLERANCE = 1e-4  # Normalized Madelung residuals
STATIC_TOLERANCE = 1e-9  # Seed displacement allowed for a stationary mode


class ComparatorAnalyzer:
    """Analyzes the stats dict of a comparator run"""

    @staticmethod
    def analyze(stats):
        """
        Analyze norm, energy, spreading, residuals and path ordering

        Returns:
            dict: {
                "status": "OK|WARNING|CRITICAL|NOT_APPLICABLE",
                "failed": [check names],
                "details": {...}
            }
        """
        if not stats:
            return {"status": "NOT_APPLICABLE", "failed": [], "details": {}}

        checks = {
            "norm": stats["max_norm_drift"] <= NORM_TOLERANCE,
            "energy": stats["energy_drift"] <= ENERGY_TOLERANCE,
            "ordering": stats["order_preserved"],
        }
        if "spread_relative_error" in stats:
            checks["spreading"] = stats["spread_relative_error"] <= SPREAD_TOLERANCE
        if stats.get("state") == "mode":
            checks["static"] = stats["max_seed_displacement"] <= STATIC_TOLERANCE

        warnings = []
        for name in ("continuity_residual", "hamilton_jacobi_residual"):
            if stats.get(name) is None:
                warnings.append(name)
            else:
                checks[name] = stats[name] <= RESIDUAL_TOLERANCE

        failed = [name for name, ok in checks.items() if not ok]
        if failed:
            status = "CRITICAL"
        elif warnings:
            status = "WARNING"
        else:
            status = "OK"
        return {
            "status": status,
            "failed": failed,
            "details": {"checks": checks, "skipped": warnings},
        }
