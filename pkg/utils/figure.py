"""Static (x, z) trajectory figure with the Gaussian waist-line overlay"""
import logging

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from analyzers.waist_analyzer import WaistLineAnalyzer, bundle_units  # noqa: E402
from models.errors import TrajectoryIOError  # noqa: E402
from models.units import rayleigh_length  # noqa: E402
from scenarios.reference import gaussian_waist_reference  # noqa: E402

logger = logging.getLogger(__name__)

# Fixed ids and no timestamp: identical bundles give identical bytes
_SVG_RC = {"svg.hashsalt": "helmholtz-rays", "svg.fonttype": "none"}


def render_figure(bundle, u, path):
    """
    Plot every trajectory thin, the +-w0 rays heavy and the waist lines dashed

    Axes are z / z_R and x / w0. Non-Gaussian bundles are drawn without the
    overlay.

    Raises:
        ValueError: empty bundle
        TrajectoryIOError: the file cannot be written
    """
    if len(bundle) == 0 or bundle.n_rays == 0:
        raise ValueError("cannot draw an empty bundle")
    u = u or bundle_units(bundle)
    z_r = rayleigh_length(u)
    paths = bundle.paths()
    x = paths["x"] / u.w0
    z = paths["z"] / z_r

    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(8, 5))
        ax.plot(z, x, color="0.6", linewidth=0.4)

        if bundle.scenario == "gaussian":
            for index in WaistLineAnalyzer.waist_rays(bundle.snapshots[0], u):
                ax.plot(z[:, index], x[:, index], color="black", linewidth=2.0)
            z_line = np.linspace(0.0, float(z.max()), 200)
            waist = gaussian_waist_reference(z_line * z_r, u) / u.w0
            ax.plot(z_line, waist, "r--", linewidth=1.2, label="waist line")
            ax.plot(z_line, -waist, "r--", linewidth=1.2)
            ax.legend(loc="upper left")
        else:
            logger.warning("no waist-line overlay for a %s bundle", bundle.scenario)

        ax.set_xlabel("z / z_R")
        ax.set_ylabel("x / w0")
        ax.set_title(f"{bundle.scenario} trajectories")
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as e:
            raise TrajectoryIOError(f"cannot write {path}: {e.strerror}") from e
        finally:
            plt.close(fig)
