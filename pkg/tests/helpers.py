"""Shared model builders and independent oracles.

The oracles here deliberately avoid the library's factored code paths:
partitions come from restricted growth strings, pairing values from a raw
n-fold lattice sum, limit coefficients from an explicit shifted-diagonal
loop.  They are slow and only meant for tiny sizes.
"""

from __future__ import annotations

import itertools

import numpy as np

from lowdensity import (
    DensityProfile,
    EnergyGrid,
    NumberSymbol,
    ShellAmplitude,
    TestFunction,
    make_model,
)

# Known Bell numbers B_0 .. B_12.
BELL_VALUES = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597]


def gaussian_shell_model(bins=128, e_max=4.0, density=1.0):
    """Two smooth shell amplitudes on a flat state; the workhorse model."""
    grid = EnergyGrid(e_max=e_max, bins=bins)
    e = grid.centers
    vectors = [
        ShellAmplitude("a", (np.exp(-((e - 1.2) ** 2) / (2 * 0.35**2))).astype(complex)),
        ShellAmplitude("b", (0.8 * np.exp(-((e - 2.1) ** 2) / (2 * 0.5**2))).astype(complex)),
    ]
    return make_model(grid, DensityProfile.flat(density, bins), vectors)


def random_model(rng, bins=12, e_max=3.0, names=("a", "b")):
    grid = EnergyGrid(e_max=e_max, bins=bins)
    density = DensityProfile(rng.uniform(0.1, 1.5, bins))
    vectors = [
        ShellAmplitude(nm, (rng.normal(size=bins) + 1j * rng.normal(size=bins)))
        for nm in names
    ]
    return make_model(grid, density, vectors)


def random_phi(rng):
    if rng.random() < 0.5:
        return TestFunction.gaussian(
            amplitude=float(rng.uniform(0.5, 1.5)),
            center=float(rng.uniform(-0.4, 0.4)),
            width=float(rng.uniform(0.6, 1.4)),
        )
    lo = float(rng.uniform(-1.0, 0.0))
    return TestFunction.indicator(lo, lo + float(rng.uniform(0.8, 2.0)), height=float(rng.uniform(0.5, 1.5)))


def random_symbols(rng, n, names=("a", "b"), s_choices=(0,)):
    return [
        NumberSymbol.make(
            str(names[rng.integers(len(names))]),
            str(names[rng.integers(len(names))]),
            int(rng.choice(s_choices)),
            random_phi(rng),
        )
        for _ in range(n)
    ]


def rgs_partitions(n):
    """All set partitions of {1..n} as tuples of increasing blocks ordered
    by least element, generated from restricted growth strings."""
    out = []

    def grow(prefix, top):
        if len(prefix) == n:
            blocks = {}
            for i, b in enumerate(prefix, start=1):
                blocks.setdefault(b, []).append(i)
            out.append(tuple(tuple(blocks[j]) for j in sorted(blocks)))
            return
        for b in range(top + 2):
            grow(prefix + [b], max(top, b))

    grow([], -1)
    return out


def pairing_oracle(model, symbols, diagram, epsilon):
    """Raw lattice sum for one smeared diagram.

    value = eps^(k-n) delta_e^n sum over bin assignments of
            prod_l kern_l(E_l) prod_m phi_m~((E_m - E_{prev(m)} - w_m)/eps)
    with prev(m) the slot paired onto m and kern_l carrying the density or
    commutator occupation factor.  No cycle factorization anywhere.
    """
    grid = model.grid
    e = grid.centers
    n = len(symbols)
    total = 0j
    for assign in itertools.product(range(grid.bins), repeat=n):
        term = 1.0 + 0j
        for l in range(1, n + 1):
            j = diagram.image(l)
            a = assign[l - 1]
            pair = np.conj(model.amplitude(symbols[j - 1].g)[a]) * model.amplitude(symbols[l - 1].f)[a]
            occ = model.density.values[a]
            term *= pair * (occ if l <= j else 1.0 + epsilon * occ)
        for m in range(1, n + 1):
            prev = diagram.preimage(m)
            xi = (e[assign[m - 1]] - e[assign[prev - 1]] - symbols[m - 1].omega.omega(grid)) / epsilon
            term *= symbols[m - 1].phi.fourier(xi)
        total += term
    return complex(total * grid.delta_e**n * epsilon ** (diagram.k - n))


def coefficient_oracle(model, kernels, s_indices):
    """Shifted-diagonal chain sum with explicit per-bin range checks."""
    grid = model.grid
    n = len(kernels)
    w = [sum(s_indices[l:]) for l in range(n)] + [0]
    if w[0] != 0:
        return 0j
    total = 0j
    for a in range(grid.bins):
        term = complex(model.density.values[a])
        ok = True
        for l in range(n):
            row, col = a + w[l], a + w[l + 1]
            if not (0 <= row < grid.bins and 0 <= col < grid.bins):
                ok = False
                break
            term *= kernels[l].matrix[row, col]
        if ok:
            total += term
    return complex(total * grid.delta_e)


def moments_from_cumulants_oracle(subset, kappa):
    """m(S) = sum over partitions of S of prod_B kappa(B), partitions from
    restricted growth strings."""
    subset = tuple(subset)
    total = 0j
    for part in rgs_partitions(len(subset)):
        prod = 1.0 + 0j
        for block in part:
            prod *= kappa[tuple(subset[i - 1] for i in block)]
        total += prod
    return total
