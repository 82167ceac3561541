"""Sweep the scale parameter and watch the truncated pair correlation
approach its limiting value.

The model is a two-shell reference: a Gaussian bump and a displaced copy on a
256-bin grid. At each epsilon the exact lattice sum is compared against the
closed-form limit; the error should drop roughly linearly in epsilon.
"""

import numpy as np

from lowdensity import (
    NumberSymbol,
    TestFunction,
    limit_truncated_smeared,
    truncated_smeared,
    make_model,
)
from lowdensity.spectral import DensityProfile, EnergyGrid, ShellAmplitude


def reference_model(bins=256, e_max=4.0):
    grid = EnergyGrid(e_max=e_max, bins=bins)
    e = grid.centers
    a = np.exp(-((e - 1.2) ** 2) / (2 * 0.35**2)).astype(complex)
    b = 0.8 * np.exp(-((e - 2.1) ** 2) / (2 * 0.5**2)).astype(complex)
    return make_model(grid, DensityProfile.flat(1.0, bins),
                      [ShellAmplitude("a", a), ShellAmplitude("b", b)])


if __name__ == "__main__":
    model = reference_model()
    phi = TestFunction.gaussian(width=1.0)
    symbols = [NumberSymbol.make("a", "b", 0, phi), NumberSymbol.make("b", "a", 0, phi)]

    limit = limit_truncated_smeared(model, symbols)
    print(f"limiting value: {limit:.10f}\n")
    print(f"{'epsilon':>8}  {'truncated':>24}  {'rel err':>10}")
    for eps in (0.4, 0.2, 0.1, 0.05, 0.025):
        value = truncated_smeared(model, symbols, eps)
        rel = abs(value - limit) / abs(limit)
        print(f"{eps:>8}  {value:>24.10f}  {rel:>10.4e}")
