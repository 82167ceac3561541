"""The hard-shell radial model gives exact Poisson counting statistics.

Every cumulant of the limiting number variable equals the coverage lambda,
and at lambda = 1 the moments run through the Bell numbers. Nonzero frequency
shift kills every cumulant outright.
"""

from lowdensity import poisson_cumulants, poisson_moments, touchard
from lowdensity.spectral import EnergyGrid

if __name__ == "__main__":
    grid = EnergyGrid(e_max=8.0, bins=64)

    for lam in (0.5, 1.0, 2.0):
        kappas = poisson_cumulants(lam, 6, grid)
        drift = max(abs(k - lam) for k in kappas)
        print(f"lambda={lam}: cumulants 1..6 all equal lambda to {drift:.1e}")

    print("\nmoments at lambda=1 (Bell numbers):")
    print("  ", [round(m.real) for m in poisson_moments(1.0, 6)])

    lam = 2.0
    print(f"\nmoments at lambda={lam} vs Touchard polynomials:")
    for n, m in enumerate(poisson_moments(lam, 6), start=1):
        print(f"  order {n}: {m.real:.6f}  (touchard {touchard(n, lam):.6f})")

    gated = poisson_cumulants(1.0, 4, grid, omega_index=3)
    print(f"\nwith a nonzero frequency shift: {gated}")
