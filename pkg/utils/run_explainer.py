"""Rule-based text report for a run summary"""


def _fmt(value, pattern=".3e"):
    return "n/a" if value is None else format(value, pattern)


class RunExplainer:
    """Turn the analyzer results of a run summary into a readable report"""

    @staticmethod
    def explain_run(summary):
        """
        Generate a report from the run summary

        Args:
            summary (dict): run summary as written to run_summary.json

        Returns:
            str: Formatted report
        """
        echo = summary.get("scenario", {})
        lines = []
        lines.append(f"**Run Report: {echo.get('scenario', 'unknown')} "
                     f"({echo.get('regime', 'unknown')})**")
        lines.append("=" * 50 + "\n")

        overall = summary.get("overall", "Unknown")
        if overall == "PASS":
            lines.append("✓ **Overall: PASS**")
            lines.append("Every applicable check is within tolerance.\n")
        elif overall == "FAIL":
            lines.append("✗ **Overall: FAIL**")
            lines.append("At least one check is out of tolerance.\n")
        else:
            lines.append(f"⚠ **Overall: {overall}**")
            lines.append("The run stopped before the checks could be made.\n")

        error = summary.get("error")
        if error:
            lines.append(f"✗ **Run aborted:** {error.get('type')}")
            lines.append(f"  - {error.get('message')}")
            lines.append(f"  - **Action:** {RunExplainer._advice(error.get('type'))}\n")

        run = summary.get("run", {})
        if run:
            lines.append(f"ℹ **Integration:** {run.get('steps')} steps of dt = {_fmt(run.get('dt'))}")
            if run.get("caustic_warnings"):
                lines.append(f"  - {run['caustic_warnings']} step(s) with a ray tube below "
                             f"a tenth of the median width")
            lines.append("")

        lines.extend(RunExplainer._waist(summary.get("waist_line")))
        lines.extend(RunExplainer._conservation(summary.get("conservation")))
        lines.extend(RunExplainer._uncertainty(summary.get("uncertainty")))
        lines.extend(RunExplainer._fringes(summary.get("fringes")))
        lines.extend(RunExplainer._fringes(summary.get("bohm_fringes"), "Bohm fringes"))
        lines.extend(RunExplainer._comparator(summary.get("comparator")))
        return "\n".join(lines)

    @staticmethod
    def _advice(error_type):
        return {
            "CausticError": "Rays crossed; use more rays or a smaller step, or stop before the focus",
            "EnergyDriftError": "Reduce scenario.dt or let the step rule choose it",
            "StepSizeError": "scenario.dt violates the step rule; remove it or make it smaller",
            "TurningPointError": "E - V reached zero; lower the potential or raise the energy",
            "EvanescentError": "The refractive index reached zero; weaken the potential",
            "DegenerateFrontError": "Too few rays carry amplitude; widen the front or add rays",
            "DomainEscapeError": "Enlarge comparator.box_length or shorten the run",
            "NodeError": "A node crossed a Bohm seed; move the seeds or change the state",
            "OutOfDomainError": "Rays left the tabulated potential grid; extend the table",
            "RunawayError": "The central ray stopped advancing; check the potential",
        }.get(error_type, "Inspect the log output")

    @staticmethod
    def _waist(result):
        if not result or result["status"] == "NOT_APPLICABLE":
            return ["ℹ **Waist line:** not applicable\n"]
        error = result["max_relative_error"]
        threshold = result["details"]["threshold"]
        if result["status"] == "OK":
            return [f"✓ **Waist line:** max relative error {_fmt(error)} (limit {threshold:g})\n"]
        return [
            f"✗ **Waist line:** max relative error {_fmt(error)} (limit {threshold:g})",
            "  - **Issue:** the +-w0 rays drift off the analytic waist line",
            "  - **Action:** check n_rays >= 201 and half_width >= 4\n",
        ]

    @staticmethod
    def _conservation(result):
        if not result or result["status"] == "NOT_APPLICABLE":
            return ["ℹ **Conservation:** no run statistics\n"]
        marker = "✓" if result["status"] == "OK" else "✗"
        lines = [f"{marker} **Conservation:** {result['status']}"]
        for name, check in result["details"].items():
            if not isinstance(check, dict):
                continue
            lines.append(f"  - {name}: {_fmt(check['value'])} (limit {check['threshold']:g}, "
                         f"{check['status']})")
        lines.append("")
        return lines

    @staticmethod
    def _uncertainty(result):
        if not result or result["status"] == "NOT_APPLICABLE":
            return []
        details = result["details"]
        marker = {"OK": "✓", "WARNING": "⚠"}.get(result["status"], "✗")
        lines = [
            f"{marker} **Uncertainty product:** {_fmt(result['launch_product'], '.3g')} at launch, "
            f"{_fmt(result['final_product'], '.3g')} at the end",
            f"  - ratio 3 z_R / 1.5 z_R: {_fmt(details['ratio_3_over_1_5'], '.3f')}",
        ]
        if result["status"] == "WARNING":
            lines.append("  - **Note:** run too short for the far-field checks")
        lines.append("")
        return lines

    @staticmethod
    def _fringes(result, label="Fringes"):
        if not result or result["status"] == "NOT_APPLICABLE":
            return []
        details = result["details"]
        if result["status"] == "WARNING":
            return [
                f"⚠ **{label}:** no periodic maxima on the screen",
                f"  - {details.get('error')}",
                "  - **Action:** run further into the far field (z >> d^2 / lambda0)\n",
            ]
        marker = "✓" if result["status"] == "OK" else "✗"
        return [
            f"{marker} **{label}:** spacing {_fmt(result['spacing'], '.4g')} w0, "
            f"Fraunhofer {_fmt(details.get('expected'), '.4g')} w0",
            f"  - relative error {_fmt(details.get('relative_error'))}\n",
        ]

    @staticmethod
    def _comparator(result):
        if not result or result.get("status") == "NOT_APPLICABLE":
            return []
        stats = result.get("stats", {})
        marker = {"OK": "✓", "WARNING": "⚠"}.get(result["status"], "✗")
        lines = [
            f"{marker} **Comparator ({stats.get('state')}):** {result['status']}",
            f"  - norm drift {_fmt(stats.get('max_norm_drift'))}, "
            f"<H> drift {_fmt(stats.get('energy_drift'))}",
            f"  - Madelung residuals: continuity {_fmt(stats.get('continuity_residual'))}, "
            f"Hamilton-Jacobi {_fmt(stats.get('hamilton_jacobi_residual'))}",
        ]
        if result.get("failed"):
            lines.append(f"  - **Failed:** {', '.join(result['failed'])}")
        lines.append("")
        return lines
