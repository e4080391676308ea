"""Overall run verdict"""


class RunVerdict:
    """Fold analyzer statuses into one verdict"""

    @staticmethod
    def calculate_overall(component_statuses):
        """
        Calculate the run verdict from analyzer statuses

        Args:
            component_statuses (dict): {
                "waist_line": "OK|CRITICAL|NOT_APPLICABLE",
                "conservation": "OK|CRITICAL|NOT_APPLICABLE",
                "uncertainty": "OK|WARNING|CRITICAL|NOT_APPLICABLE",
                "fringes": "OK|WARNING|CRITICAL|NOT_APPLICABLE",
                "bohm_fringes": "OK|WARNING|CRITICAL|NOT_APPLICABLE",
                "comparator": "OK|WARNING|CRITICAL|NOT_APPLICABLE",
            }

        Returns:
            str: "PASS" or "FAIL"
        """
        # WARNING means a check could not be made (run too short, node in the window)
        if any(status == "CRITICAL" for status in component_statuses.values()):
            return "FAIL"
        return "PASS"
