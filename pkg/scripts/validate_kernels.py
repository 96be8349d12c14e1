"""Audit every stock kernel family against the structural assumptions.

Prints one report per family; exits nonzero if any admissible family
fails.  The deliberately broken growing-scale family is included to
show what a violation report looks like; it does not affect the exit
status.
"""

import sys

from memwave.kernels import (BASE_SHAPES, RescaledKernel, RheologicalKernel,
                             TIME_PROFILES, validate_assumptions)

FAMILIES = [
    ("rescaled exp, eps=1", RescaledKernel(
        shape=BASE_SHAPES["exponential"], eps=TIME_PROFILES["constant"](1.0))),
    ("rescaled exp, eps=e^-t", RescaledKernel(
        shape=BASE_SHAPES["exponential"],
        eps=TIME_PROFILES["exp_decay"](1.0, 1.0))),
    ("rescaled exp, eps~1/(1+t)", RescaledKernel(
        shape=BASE_SHAPES["exponential"],
        eps=TIME_PROFILES["inverse_softplus"](2.0))),
    ("rescaled triangular, eps=e^-t", RescaledKernel(
        shape=BASE_SHAPES["triangular"],
        eps=TIME_PROFILES["exp_decay"](1.0, 1.0))),
    ("rheological tanh step", RheologicalKernel(
        K0=TIME_PROFILES["tanh_step"](1.0, 2.0))),
    ("rheological log growth", RheologicalKernel(
        K0=TIME_PROFILES["log_growth"](1.0))),
]

BROKEN = RescaledKernel(shape=BASE_SHAPES["exponential"],
                        eps=TIME_PROFILES["exp_decay"](1.0, -0.5))


def main():
    bad = 0
    for name, kernel in FAMILIES:
        report = validate_assumptions(kernel)
        print("== %s" % name)
        for line in report.summary_lines():
            print(line)
        bad += 0 if report.passed else 1

    print("== growing scale (expected to fail)")
    for line in validate_assumptions(BROKEN).summary_lines():
        print(line)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
