"""Sweep kernel scales toward the Kelvin-Voigt damping limit.

Every kernel keeps unit first moment, so each memory run is compared
against the same local damping equation; the sup-in-time distance must
shrink down the sweep.  Linear and cubic variants.
"""

import numpy as np

from memwave.kernels import BASE_SHAPES, RescaledKernel, TIME_PROFILES
from memwave.oracles import kv_limit_experiment
from memwave.spectral import Spectrum, make_nonlinearity

EPS_VALUES = (0.5, 0.25, 0.125, 0.0625)


def main():
    spectrum = Spectrum.interval(4)
    a0 = np.array([0.5, -0.2, 0.1, 0.05])
    b0 = np.array([0.0, 0.3, -0.1, 0.0])
    kernels = [("eps=%g" % e, RescaledKernel(
        shape=BASE_SHAPES["exponential"], eps=TIME_PROFILES["constant"](e)))
        for e in EPS_VALUES]
    for name in ("zero", "cubic"):
        rows = kv_limit_experiment(kernels, spectrum, make_nonlinearity(name),
                                   None, a0, b0, 0.0, 1.0, 5e-4,
                                   n_age=256, s_min=1e-5)
        print("nonlinearity: %s" % name)
        prev = None
        for label, m, gap in rows:
            ratio = "" if prev is None else "  ratio %.3f" % (gap / prev)
            print("  %-12s m=%.6f  sup gap %.4e%s" % (label, m, gap, ratio))
            prev = gap


if __name__ == "__main__":
    main()
