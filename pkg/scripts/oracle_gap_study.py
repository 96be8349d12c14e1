"""Gap between the history solver and the auxiliary-variable oracle.

For the constant exponential kernel the memory force reduces to a local
ODE variable, integrated at fourth order.  The table shows the sup-in-
time max modal gap under simultaneous (dt, age-grid) refinement; the
observed order should be near 2, the age-quadrature order.
"""

import numpy as np

from memwave.kernels import BASE_SHAPES, RescaledKernel, TIME_PROFILES
from memwave.oracles import exp_kernel_oracle, sup_modal_gap
from memwave.solver import WaveModel, solve
from memwave.spectral import Spectrum, make_nonlinearity

EPS = 1.0
T_END = 5.0
LEVELS = [(4e-3, 64), (2e-3, 128), (1e-3, 256)]


def main():
    spectrum = Spectrum.interval(8)
    nonlin = make_nonlinearity("cubic_minus_linear")
    rng = np.random.default_rng(11)
    a0 = rng.normal(size=8) / (1.0 + np.arange(8)) ** 2
    b0 = rng.normal(size=8) / (1.0 + np.arange(8)) ** 2
    kernel = RescaledKernel(shape=BASE_SHAPES["exponential"],
                            eps=TIME_PROFILES["constant"](EPS))
    model = WaveModel(kernel=kernel, spectrum=spectrum, nonlinearity=nonlin)

    print("dt        J    gap")
    prev = None
    for dt, n_age in LEVELS:
        rec = solve(model, a0, b0, None, 0.0, T_END, dt,
                    output_every=int(round(0.1 / dt)), n_age=n_age)
        orc = exp_kernel_oracle(EPS, spectrum, nonlin, None, a0, b0,
                                0.0, T_END, dt,
                                output_every=int(round(0.1 / dt)))
        gap = sup_modal_gap(rec.times, rec.a, orc.times, orc.a)
        order = "" if prev is None else "  order %.2f" % np.log2(prev / gap)
        print("%-8g %4d  %.3e%s" % (dt, n_age, gap, order))
        prev = gap


if __name__ == "__main__":
    main()
