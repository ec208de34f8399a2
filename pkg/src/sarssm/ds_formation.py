"""Distributed scatterer formation per grid cell.

A cell's statistically homogeneous pixels (SHPs) are found with a two-sample
Kolmogorov-Smirnov test of amplitude series against the window-center
reference pixel.  The selected pixels form Z (p acquisitions x l pixels),
whose normalized sample covariance yields the coherence magnitudes,
interferometric phases, per-acquisition power, and all phase-closure
triplets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    EmptySeries,
    LengthMismatch,
    WindowOutOfBounds,
    ZeroInterferogram,
    ZeroRow,
)
from .stack_io import SlcStack

DEFAULT_ALPHA = 0.05
DEFAULT_MIN_PIXELS = 20


def triplet_indices(p: int) -> np.ndarray:
    """All (n, m, k) with n < m < k as an int array of shape (C(p,3), 3)."""
    if p < 3:
        return np.empty((0, 3), dtype=np.intp)
    return np.array(list(combinations(range(p), 3)), dtype=np.intp)


def ks_statistic(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic, sup|F_a - F_b|."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise EmptySeries("KS statistic needs non-empty series")
    if a.size != b.size:
        raise LengthMismatch(f"series lengths differ: {a.size} vs {b.size}")
    a_sorted = np.sort(a)
    b_sorted = np.sort(b)
    grid = np.concatenate([a_sorted, b_sorted])
    cdf_a = np.searchsorted(a_sorted, grid, side="right") / a.size
    cdf_b = np.searchsorted(b_sorted, grid, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def ks_critical_value(alpha: float, p: int) -> float:
    """Asymptotic two-sample critical distance for equal sample sizes p."""
    c_alpha = math.sqrt(-0.5 * math.log(alpha / 2.0))
    return c_alpha * math.sqrt(2.0 / p)


def select_shp(stack: SlcStack, window, alpha: float = DEFAULT_ALPHA) -> list[tuple[int, int]]:
    """Pixels in the window whose amplitude series match the center pixel.

    Parameters
    ----------
    stack : SlcStack
    window : (row0, col0, height, width)
        Pixel window inside the stack grid.
    alpha : float
        KS significance level; a pixel is kept when its statistic stays
        below the asymptotic critical value.  The center reference pixel is
        always kept.

    Returns
    -------
    list of (row, col), sorted row-major.
    """
    row0, col0, height, width = window
    if not (0 < alpha < 1):
        raise ValueError("alpha must lie in (0, 1)")
    if row0 < 0 or col0 < 0 or height < 1 or width < 1 \
            or row0 + height > stack.rows or col0 + width > stack.cols:
        raise WindowOutOfBounds(f"window {window} outside {stack.rows}x{stack.cols} grid")
    amp = np.abs(stack.pixels[:, row0:row0 + height, col0:col0 + width].astype(np.complex128))
    ref_r, ref_c = height // 2, width // 2
    ref_series = amp[:, ref_r, ref_c]
    threshold = ks_critical_value(alpha, stack.p)
    selected = []
    for r in range(height):
        for c in range(width):
            if (r, c) == (ref_r, ref_c) or ks_statistic(amp[:, r, c], ref_series) <= threshold:
                selected.append((row0 + r, col0 + c))
    return selected


@dataclass
class DsCell:
    """One distributed scatterer: the selected pixels of a grid cell."""

    cell_row: int
    cell_col: int
    pixel_indices: list[tuple[int, int]]
    z: np.ndarray  # complex128, shape (p, l)

    @property
    def l(self) -> int:
        return self.z.shape[1]


def build_ds_cell(stack: SlcStack, cell_row: int, cell_col: int, window,
                  alpha: float = DEFAULT_ALPHA) -> DsCell:
    """Select SHPs in a window and gather their complex series into Z."""
    indices = select_shp(stack, window, alpha)
    rows = [idx[0] for idx in indices]
    cols = [idx[1] for idx in indices]
    z = stack.pixels[:, rows, cols].astype(np.complex128)
    return DsCell(cell_row=cell_row, cell_col=cell_col, pixel_indices=indices, z=z)


def coherence_matrix(z: np.ndarray) -> np.ndarray:
    """Normalized sample covariance of Z (p x l): Hermitian, unit diagonal.

    C[n, m] = sum_i z[n,i] conj(z[m,i]) / sqrt(sum_i |z[n,i]|^2 * sum_i |z[m,i]|^2)
    """
    z = np.asarray(z, dtype=np.complex128)
    if z.ndim != 2 or z.shape[1] < 1:
        raise ZeroRow("Z must be a (p, l) matrix with l >= 1")
    norms_sq = np.sum(np.abs(z) ** 2, axis=1)
    if np.any(norms_sq == 0.0):
        raise ZeroRow(f"row {int(np.argmin(norms_sq != 0.0))} of Z has zero norm")
    num = z @ z.conj().T
    c = num / np.sqrt(np.outer(norms_sq, norms_sq))
    c = 0.5 * (c + c.conj().T)  # exact Hermitian symmetry
    np.fill_diagonal(c, 1.0)
    return c


def phase_closure(i_nm: complex, i_mk: complex, i_kn: complex) -> float:
    """Principal-value argument of the triple interferogram product.

    The product is grouped as i_nm * (i_mk * i_kn): when the last two factors
    are a conjugate pair the imaginary part cancels exactly in floating
    point, so degenerate triplets close to exactly zero.
    """
    if i_nm == 0 or i_mk == 0 or i_kn == 0:
        raise ZeroInterferogram("phase closure of a zero interferogram")
    return float(np.angle(i_nm * (i_mk * i_kn)))


def closure_values(c: np.ndarray, triplets: np.ndarray) -> np.ndarray:
    """Closure phases of a Hermitian matrix for the given (n, m, k) rows."""
    n, m, k = triplets[:, 0], triplets[:, 1], triplets[:, 2]
    prod = c[n, m] * (c[m, k] * np.conj(c[n, k]))
    return np.angle(prod)


@dataclass
class Observables:
    """Per-cell interferometric observables derived from C and Z."""

    gamma: np.ndarray           # (p, p) coherence magnitude, unit diagonal
    phase: np.ndarray           # (p, p) interferometric phase, antisymmetric
    power: np.ndarray           # (p,) mean |z|^2 per acquisition
    closure_triplets: np.ndarray  # (T, 3) int, n < m < k
    closure_values: np.ndarray    # (T,) radians in (-pi, pi]

    def closures(self) -> list[tuple[int, int, int, float]]:
        return [
            (int(n), int(m), int(k), float(v))
            for (n, m, k), v in zip(self.closure_triplets, self.closure_values)
        ]


def observables(c: np.ndarray, z: np.ndarray) -> Observables:
    """Decompose C into coherence magnitude, phase, power, and closures."""
    p = c.shape[0]
    gamma = np.clip(np.abs(c), 0.0, 1.0)
    np.fill_diagonal(gamma, 1.0)
    phase = np.angle(c)
    phase = np.triu(phase, k=1)
    phase = phase - phase.T  # exact antisymmetry, zero diagonal
    power = np.mean(np.abs(np.asarray(z, dtype=np.complex128)) ** 2, axis=1)
    triplets = triplet_indices(p)
    values = closure_values(c, triplets) if len(triplets) else np.empty(0)
    return Observables(
        gamma=gamma,
        phase=phase,
        power=power,
        closure_triplets=triplets,
        closure_values=values,
    )
