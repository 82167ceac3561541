"""Discretized energy shells, kernels, and the limiting correlation formulas.

The one-particle Hamiltonian is represented by a uniform grid of energy bins.
A delta-normalized spectral projection P_E restricted to the grid turns every
operator into its energy kernel K(E_a, E_b) evaluated at bin centers, and
every energy integral into a bin sum weighted by delta_e.  Rank-one symbols
|f><g| carry one complex shell amplitude per vector, with the density of
states already absorbed, so <g, P_E f> = conj(v_g(E)) * v_f(E) and no
geometric factors appear anywhere downstream.

The limiting value of a truncated multi-time correlation function is a single
bin sum over a chain of frequency-shifted kernel entries; the delta chain in
the time variables is never materialized.  This module computes that
coefficient, the smeared limit, and the free star-product moment that must
agree with it at zero frequency.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import pi, sqrt
from typing import Callable, Mapping

import numpy as np

from .symbols import FrequencyIndex, NumberSymbol, product_integral

TWO_PI = 2.0 * pi


@dataclass(frozen=True)
class EnergyGrid:
    """Uniform energy discretization on [e_min, e_max].

    Parameters
    ----------
    e_max : float
        Upper edge of the covered energy window.
    bins : int
        Number of bins, at least 2.
    e_min : float, optional
        Lower edge, 0 by default.

    Notes
    -----
    Bin a covers [e_min + a*delta_e, e_min + (a+1)*delta_e) and all kernel
    and amplitude samples live at the bin centers
    E_a = e_min + (a + 1/2) * delta_e.
    """

    e_max: float
    bins: int
    e_min: float = 0.0

    def __post_init__(self):
        if self.bins < 2 or int(self.bins) != self.bins:
            raise ValueError("bins must be an integer >= 2")
        if not self.e_max > self.e_min:
            raise ValueError("e_max must exceed e_min")

    @property
    def delta_e(self) -> float:
        return (self.e_max - self.e_min) / self.bins

    @cached_property
    def centers(self) -> np.ndarray:
        return self.e_min + (np.arange(self.bins) + 0.5) * self.delta_e


@dataclass(frozen=True, eq=False)
class DensityProfile:
    """Occupation density n(E_a) >= 0 per bin, the state's spectral density."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("density values must be a 1-D array")
        if np.any(vals < 0):
            raise ValueError("density must be nonnegative")
        object.__setattr__(self, "values", vals)

    @classmethod
    def flat(cls, value: float, bins: int) -> "DensityProfile":
        return cls(np.full(bins, float(value)))


@dataclass(frozen=True, eq=False)
class ShellAmplitude:
    """Complex amplitude v(E_a) of a one-particle vector on the energy shells.

    The density of states is folded in, so inner products against spectral
    projections are plain products: <g, P_E f> = conj(v_g(E)) v_f(E).
    """

    name: str
    values: np.ndarray

    def __post_init__(self):
        if not self.name:
            raise ValueError("shell amplitude needs a nonempty name")
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 1:
            raise ValueError("amplitude values must be a 1-D array")
        object.__setattr__(self, "values", vals)


def radial_to_shell(grid: EnergyGrid, radial: Callable, name: str, dos: str = "three_d") -> ShellAmplitude:
    """Convert a radial wave function to shell amplitudes.

    Parameters
    ----------
    radial : callable
        Radial profile; sampled at sqrt(E_a) for the three_d dispersion
        omega(k) = |k|^2, or directly at E_a for flat.
    dos : {"three_d", "flat"}
        three_d folds in the spherical shell measure so that
        <f, P_E f> = 2 pi sqrt(E) |radial(sqrt(E))|^2.

    Returns
    -------
    ShellAmplitude
    """
    e = grid.centers
    if dos == "three_d":
        r = np.sqrt(e)
        vals = np.sqrt(TWO_PI * r) * np.asarray(radial(r), dtype=complex)
    elif dos == "flat":
        vals = np.asarray(radial(e), dtype=complex)
    else:
        raise ValueError(f"unknown density-of-states mode {dos!r}")
    return ShellAmplitude(name, vals)


@dataclass(frozen=True, eq=False)
class SpectralModel:
    """Grid, occupation density, and named shell amplitudes."""

    grid: EnergyGrid
    density: DensityProfile
    vectors: Mapping[str, ShellAmplitude]

    def amplitude(self, name: str) -> np.ndarray:
        try:
            return self.vectors[name].values
        except KeyError:
            raise KeyError(f"unknown vector {name!r}; model has {sorted(self.vectors)}") from None


def make_model(grid: EnergyGrid, density: DensityProfile, vectors) -> SpectralModel:
    """Validate shapes and assemble a SpectralModel.

    `vectors` is either a mapping name -> array-like or an iterable of
    ShellAmplitude.
    """
    if len(density.values) != grid.bins:
        raise ValueError("density length does not match grid bins")
    table: dict[str, ShellAmplitude] = {}
    items = vectors.items() if isinstance(vectors, Mapping) else ((v.name, v) for v in vectors)
    for name, v in items:
        amp = v if isinstance(v, ShellAmplitude) else ShellAmplitude(name, np.asarray(v, dtype=complex))
        if amp.name != name:
            raise ValueError(f"vector name mismatch: {name!r} vs {amp.name!r}")
        if len(amp.values) != grid.bins:
            raise ValueError(f"vector {name!r} length does not match grid bins")
        table[name] = amp
    return SpectralModel(grid=grid, density=density, vectors=table)


@dataclass(frozen=True, eq=False)
class ShellKernel:
    """Energy kernel K(E_a, E_b) of a trace-class symbol on the grid."""

    grid: EnergyGrid
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (self.grid.bins, self.grid.bins):
            raise ValueError("kernel matrix must be bins x bins")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def rank_one(cls, grid: EnergyGrid, v_f: np.ndarray, v_g: np.ndarray) -> "ShellKernel":
        """Kernel of |f><g|: K(E_a, E_b) = v_f(E_a) conj(v_g(E_b))."""
        return cls(grid, np.outer(np.asarray(v_f, complex), np.conj(np.asarray(v_g, complex))))

    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.matrix)


def rank_one_kernel(model: SpectralModel, f: str, g: str) -> ShellKernel:
    return ShellKernel.rank_one(model.grid, model.amplitude(f), model.amplitude(g))


def star_product(t: ShellKernel, u: ShellKernel) -> ShellKernel:
    """Free white-noise product: (T * U)(E_a, E_b) = 2 pi T(E_a, E_a) U(E_a, E_b).

    This is the kernel of 2 pi * integral dE P_E T P_E U on the grid; the
    projection pins the first energy argument of both factors.
    """
    if t.grid != u.grid:
        raise ValueError("star product needs kernels on the same grid")
    return ShellKernel(t.grid, TWO_PI * t.diagonal()[:, None] * u.matrix)


def state_expectation(model: SpectralModel, kernel: ShellKernel) -> complex:
    """Tr(n_hat T) = sum_a n(E_a) K(E_a, E_a) delta_e."""
    if kernel.grid != model.grid:
        raise ValueError("kernel grid does not match model grid")
    return complex(np.sum(model.density.values * kernel.diagonal()) * model.grid.delta_e)


@dataclass(frozen=True)
class LimitCoefficient:
    """Scalar part C of a limiting truncated correlation.

    The full limiting distribution is
    C * (2 pi)^(n-1) * delta(t_2 - t_1) ... delta(t_n - t_{n-1});
    only C and the chain order are materialized.
    """

    value: complex
    delta_chain_order: int
    omega_gate_passed: bool


def limit_truncated_coefficient(model: SpectralModel, kernels, freqs) -> LimitCoefficient:
    """Limiting truncated coefficient for a chain of kernels and frequencies.

    Parameters
    ----------
    kernels : sequence of ShellKernel
        Symbols T_1 .. T_n in time order.
    freqs : sequence of FrequencyIndex
        Integer lattice frequencies omega_l = s_l * delta_e.

    Returns
    -------
    LimitCoefficient
        C = sum_a delta_e n(E_a) T_1(E_a + w_1, E_a + w_2) T_2(E_a + w_2, E_a + w_3)
            ... T_n(E_a + w_n, E_a)
        with w_l = omega_n + ... + omega_l the running suffix sums, read as
        integer bin shifts; reads outside the grid contribute 0.  The value is
        exactly 0 (gate not passed) unless w_1 = omega_1 + ... + omega_n = 0.
    """
    kernels = list(kernels)
    freqs = list(freqs)
    n = len(kernels)
    if n == 0 or len(freqs) != n:
        raise ValueError("need matching nonempty kernel and frequency lists")
    for k in kernels:
        if k.grid != model.grid:
            raise ValueError("kernel grid does not match model grid")
    shifts = np.cumsum([f.s for f in freqs][::-1])[::-1]  # shifts[l-1] = s_l + ... + s_n
    if shifts[0] != 0:
        return LimitCoefficient(0j, n - 1, omega_gate_passed=False)

    m = model.grid.bins
    a = np.arange(m)
    ok = np.ones(m, dtype=bool)
    for w in shifts:
        ok &= (a + w >= 0) & (a + w < m)
    a = a[ok]
    acc = model.density.values[a].astype(complex)
    for l in range(n):
        row = a + shifts[l]
        col = a + (shifts[l + 1] if l + 1 < n else 0)
        acc = acc * kernels[l].matrix[row, col]
    value = complex(np.sum(acc) * model.grid.delta_e)
    return LimitCoefficient(value, n - 1, omega_gate_passed=True)


def limit_truncated_smeared(model: SpectralModel, symbols) -> complex:
    """Limiting truncated correlation smeared with each symbol's test function.

    Smearing the delta chain gives (2 pi)^(n-1) * integral dt phi_1(t) ...
    phi_n(t) times the limiting coefficient; exactly 0 when the frequency
    gate fails.
    """
    symbols = list(symbols)
    kernels = [rank_one_kernel(model, s.f, s.g) for s in symbols]
    coeff = limit_truncated_coefficient(model, kernels, [s.omega for s in symbols])
    if not coeff.omega_gate_passed:
        return 0j
    n = len(symbols)
    return TWO_PI ** (n - 1) * product_integral([s.phi for s in symbols]) * coeff.value


def free_moment(model: SpectralModel, symbols) -> complex:
    """Mixed moment of the free white-noise functional at zero frequency.

    The multiplication rule N_T(t) N_U(t') = delta(t - t') N_{T*U}(t)
    collapses the product to one symbol; smearing contributes the same
    product integral as the limiting side, so this must reproduce
    limit_truncated_smeared exactly on the grid.
    """
    symbols = list(symbols)
    if not symbols:
        raise ValueError("free_moment needs at least one symbol")
    for s in symbols:
        if not s.omega.is_zero:
            raise ValueError("free_moment is defined at zero frequency only")
    kernel = rank_one_kernel(model, symbols[0].f, symbols[0].g)
    for s in symbols[1:]:
        kernel = star_product(kernel, rank_one_kernel(model, s.f, s.g))
    return state_expectation(model, kernel) * product_integral([s.phi for s in symbols])
